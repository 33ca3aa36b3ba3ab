/** Style constants mirroring the server renderer, plus taxonomy colors. */

import type { TaxonomyPayload, TypeEntry } from "./types.js";

export interface Style {
  semanticColor: string;
  syntacticColor: string;
  textColor: string;
  background: string;
  typeColors: Record<string, string>;
  fontFamily: string;
  fontSize: number;
  slotHeight: number;
  arcGap: number;
  tokenHeight: number;
  cornerRadius: number;
  padding: number;
}

export const defaultStyle: Style = {
  semanticColor: "#3A6EA5",
  syntacticColor: "#8A8F98",
  textColor: "#1A1A1A",
  background: "#FFFFFF",
  typeColors: {},
  fontFamily: "Helvetica, Arial, sans-serif",
  fontSize: 13.0,
  slotHeight: 18.0,
  arcGap: 8.0,
  tokenHeight: 16.0,
  cornerRadius: 6.0,
  padding: 16.0,
};

export function flattenColors(taxonomy: TaxonomyPayload | null): Record<string, string> {
  const colors: Record<string, string> = {};
  const walk = (entry: TypeEntry) => {
    colors[entry.name] = entry.color;
    entry.children.forEach(walk);
  };
  taxonomy?.roots.forEach(walk);
  return colors;
}

export function styleWithTaxonomy(taxonomy: TaxonomyPayload | null): Style {
  return { ...defaultStyle, typeColors: flattenColors(taxonomy) };
}

export function colorFor(style: Style, type: string | null, layer: string): string {
  if (type !== null && style.typeColors[type] !== undefined) {
    return style.typeColors[type];
  }
  return layer === "semantic" ? style.semanticColor : style.syntacticColor;
}
