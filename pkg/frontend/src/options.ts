/** Options panel model and its mapping onto layout/svg query parameters. */

export interface ViewOptions {
  showSemantics: boolean;
  showSyntax: boolean;
  includeTypes: string[];
  excludeTypes: string[];
  hideArcsWhileDragging: boolean;
  width: number | null;
}

export const defaultOptions: ViewOptions = {
  showSemantics: true,
  showSyntax: true,
  includeTypes: [],
  excludeTypes: [],
  hideArcsWhileDragging: true,
  width: null,
};

/** Query parameters for GET /layout and GET /svg; identical options yield
 * identical parameters, so toggling a filter on and back off restores the
 * exact previous request. */
export function layoutParams(options: ViewOptions): URLSearchParams {
  const params = new URLSearchParams();
  if (options.width !== null) params.set("width", String(options.width));
  if (!options.showSemantics) params.set("semantics", "false");
  if (!options.showSyntax) params.set("syntax", "false");
  if (options.includeTypes.length > 0) {
    params.set("include", options.includeTypes.join(","));
  }
  if (options.excludeTypes.length > 0) {
    params.set("exclude", options.excludeTypes.join(","));
  }
  return params;
}

export function parseTypeList(raw: string): string[] {
  return raw
    .split(",")
    .map((part) => part.trim())
    .filter((part) => part.length > 0);
}
