/** Wire types mirroring the service's JSON schemas. */

export type AnchorRef =
  | { token: number }
  | { mention: string }
  | { relation: string };

export interface TokenPayload {
  index: number;
  start: number;
  end: number;
  surface: string;
}

export interface MentionPayload {
  id: string;
  label: string;
  type: string | null;
  layer: "semantic" | "syntactic";
  anchors: [number, number][];
}

export interface ArgumentPayload {
  role: string;
  target: AnchorRef;
}

export interface RelationPayload {
  id: string;
  label: string;
  type: string | null;
  layer: "semantic" | "syntactic";
  directionality: "directed" | "undirected" | "bidirectional";
  trigger: AnchorRef | null;
  arguments: ArgumentPayload[];
}

export interface DocumentPayload {
  id: string;
  text: string;
  source_format: string;
  taxonomy_ref: string | null;
  tokens: TokenPayload[];
  mentions: MentionPayload[];
  relations: RelationPayload[];
}

export interface DataFolderEntry {
  id: string;
  format: string;
  files: string[];
  taxonomy_id: string | null;
}

export interface TokenBox {
  token: number;
  x: number;
  width: number;
  text: string;
}

export interface GeometryRow {
  index: number;
  y: number;
  tokens: TokenBox[];
}

export interface MentionSpan {
  id: string;
  row: number;
  x1: number;
  x2: number;
  label: string;
  type: string | null;
  layer: string;
}

export interface ArcSegment {
  row: number;
  x1: number;
  x2: number;
  slot: number;
}

export interface ArcAttachment {
  role: string;
  ref: AnchorRef;
  row: number;
  x: number;
  height: number;
  arrow: boolean;
}

export interface ArcLabel {
  row: number;
  x1: number;
  x2: number;
  text: string;
}

export interface Arc {
  id: string;
  side: "above" | "below";
  label: ArcLabel;
  segments: ArcSegment[];
  attachments: ArcAttachment[];
}

export interface Geometry {
  row_range: [number, number];
  rows: GeometryRow[];
  mentions: MentionSpan[];
  arcs: Arc[];
  handles: Record<string, { row: number; x: number; slot: number }>;
  visited_relations: string[];
}

export interface TreeNode {
  ref: AnchorRef;
  label: string;
  children: { role: string; node: TreeNode }[];
}

export interface TreePayload {
  root: TreeNode;
}

export interface TypeEntry {
  name: string;
  color: string;
  children: TypeEntry[];
}

export interface TaxonomyPayload {
  roots: TypeEntry[];
}

export type EditOp =
  | { kind: "relabel"; id: string; label: string }
  | { kind: "retype"; id: string; type: string | null }
  | { kind: "reattach"; relation_id: string; arg_index: number; target: AnchorRef }
  | { kind: "create_mention"; label: string; anchors: [number, number][] }
  | { kind: "delete"; id: string }
  | { kind: "hide"; id: string }
  | { kind: "unhide"; id: string }
  | { kind: "recolor_type"; type: string; color: string; cascade: boolean }
  | { kind: "move_token"; token_index: number; row: number; x: number };

export interface EditResponse {
  seq: number;
  removed_ids: string[];
  document: DocumentPayload;
}

export interface ServiceError {
  error: string;
  message: string;
}
