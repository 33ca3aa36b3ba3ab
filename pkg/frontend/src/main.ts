/** Page bootstrap: three panels against the HTTP API, nothing else.
 *
 * The annotation panel renders layout geometry fetched from the service;
 * dragging a token posts a move_token op and re-requests layout; a single
 * click opens the edit popover; a double click opens the tree panel.  All
 * annotation state lives server-side, so reloading reproduces the view.
 */

import { ApiClient, ApiError } from "./api.js";
import { parseTypeList, ViewOptions } from "./options.js";
import { dragTarget, renderAnnotationSvg } from "./render.js";
import { renderTreeSvg } from "./treeview.js";
import { Style, styleWithTaxonomy } from "./style.js";
import * as state from "./state.js";
import type {
  DocumentPayload,
  EditOp,
  Geometry,
  TaxonomyPayload,
} from "./types.js";

const ROW_HEIGHT = 150.0;
const BASELINE_OFFSET = 90.0;

const api = new ApiClient("");

let ui = state.initialState;
let doc: DocumentPayload | null = null;
let geometry: Geometry | null = null;
let taxonomy: TaxonomyPayload | null = null;
let style: Style = styleWithTaxonomy(null);

const el = (id: string) => document.getElementById(id)!;

function setStatus(): void {
  el("status").textContent = ui.pendingEdit ? "saving..." : "";
  const toast = el("toast");
  toast.textContent = ui.toast ?? "";
  toast.style.display = ui.toast ? "block" : "none";
  if (ui.toast) {
    setTimeout(() => {
      ui = state.clearToast(ui);
      setStatus();
    }, 4000);
  }
}

async function refreshLayout(): Promise<void> {
  if (!ui.documentId) return;
  geometry = await api.getLayout(ui.documentId, ui.options);
  const panel = el("annotation-panel");
  panel.innerHTML = renderAnnotationSvg(geometry, style);
}

async function loadDocument(id: string): Promise<void> {
  ui = state.selectDocument(ui, id);
  doc = await api.getDocument(id);
  taxonomy = doc.taxonomy_ref ? await api.getTaxonomy(doc.taxonomy_ref) : null;
  style = styleWithTaxonomy(taxonomy);
  closePopover();
  el("tree-panel").style.display = "none";
  await refreshLayout();
  setStatus();
  (el("export-svg") as HTMLAnchorElement).href =
    api.svgUrl(id, ui.options);
  (el("export-diff") as HTMLAnchorElement).href = api.diffUrl(id);
}

async function applyEdit(op: EditOp): Promise<void> {
  const documentId = ui.documentId;
  if (!documentId) return;
  ui = state.beginEdit(ui);
  setStatus();
  try {
    const response = await api.applyEdit(documentId, op);
    doc = response.document;
    ui = state.finishEdit(ui);
    const taxonomyRef = doc.taxonomy_ref;
    if (op.kind === "recolor_type" && taxonomyRef) {
      taxonomy = await api.getTaxonomy(taxonomyRef);
      style = styleWithTaxonomy(taxonomy);
    }
    await refreshLayout();
  } catch (err) {
    const message = err instanceof ApiError
      ? `${err.code}: ${err.message}` : String(err);
    ui = state.failEdit(ui, message);
    await refreshLayout(); // roll back to server truth
  }
  setStatus();
}

// --- edit popover ---------------------------------------------------------------

function closePopover(): void {
  el("popover").style.display = "none";
  ui = state.select(ui, null);
}

function openPopover(targetId: string, pageX: number, pageY: number): void {
  if (!doc) return;
  const mention = doc.mentions.find((m) => m.id === targetId);
  const relation = doc.relations.find((r) => r.id === targetId);
  const element = mention ?? relation;
  if (!element) return;
  ui = state.select(ui, {
    kind: mention ? "mention" : "relation",
    id: targetId,
  });

  const popover = el("popover");
  popover.style.display = "block";
  popover.style.left = `${pageX + 8}px`;
  popover.style.top = `${pageY + 8}px`;
  el("popover-title").textContent = `${targetId} (${element.layer})`;
  (el("edit-label") as HTMLInputElement).value = element.label;

  const typeSelect = el("edit-type") as HTMLSelectElement;
  typeSelect.innerHTML = "";
  const names: string[] = [];
  const walk = (entry: { name: string; children: any[] }) => {
    names.push(entry.name);
    entry.children.forEach(walk);
  };
  taxonomy?.roots.forEach(walk);
  const blank = document.createElement("option");
  blank.value = "";
  blank.textContent = "(untyped)";
  typeSelect.appendChild(blank);
  for (const name of names) {
    const option = document.createElement("option");
    option.value = name;
    option.textContent = name;
    typeSelect.appendChild(option);
  }
  typeSelect.value = element.type ?? "";

  const recolorRow = el("recolor-row");
  recolorRow.style.display = element.type ? "flex" : "none";
  if (element.type) {
    (el("edit-color") as HTMLInputElement).value =
      style.typeColors[element.type] ?? "#3A6EA5";
  }
}

function wirePopover(): void {
  el("apply-label").addEventListener("click", () => {
    if (!ui.selected) return;
    const label = (el("edit-label") as HTMLInputElement).value;
    void applyEdit({ kind: "relabel", id: ui.selected.id, label });
  });
  el("apply-type").addEventListener("click", () => {
    if (!ui.selected) return;
    const value = (el("edit-type") as HTMLSelectElement).value;
    void applyEdit({ kind: "retype", id: ui.selected.id,
                     type: value === "" ? null : value });
  });
  el("apply-color").addEventListener("click", () => {
    if (!ui.selected || !doc) return;
    const element = doc.mentions.find((m) => m.id === ui.selected!.id)
      ?? doc.relations.find((r) => r.id === ui.selected!.id);
    if (!element?.type) return;
    const color = (el("edit-color") as HTMLInputElement).value.toUpperCase();
    const cascade = (el("edit-cascade") as HTMLInputElement).checked;
    void applyEdit({ kind: "recolor_type", type: element.type, color, cascade });
  });
  el("hide-element").addEventListener("click", () => {
    if (!ui.selected) return;
    void applyEdit({ kind: "hide", id: ui.selected.id });
    closePopover();
  });
  el("delete-element").addEventListener("click", () => {
    if (!ui.selected) return;
    void applyEdit({ kind: "delete", id: ui.selected.id });
    closePopover();
  });
  el("close-popover").addEventListener("click", closePopover);
}

// --- tree panel ------------------------------------------------------------------

async function openTreePanel(select: string): Promise<void> {
  const documentId = ui.documentId;
  if (!documentId) return;
  ui = state.openTree(ui, select);
  const tree = await api.getTree(documentId, select);
  const panel = el("tree-panel");
  panel.style.display = "block";
  el("tree-content").innerHTML = renderTreeSvg(tree, style);
}

// --- annotation panel events --------------------------------------------------------

function annotationTarget(event: Event): { id: string | null; token: number | null } {
  let node = event.target as Element | null;
  while (node && node.tagName !== "svg") {
    const dataId = node.getAttribute("data-id");
    if (dataId) return { id: dataId, token: null };
    const dataToken = node.getAttribute("data-token");
    if (dataToken) return { id: null, token: Number(dataToken) };
    node = node.parentElement;
  }
  return { id: null, token: null };
}

function wireAnnotationPanel(): void {
  const panel = el("annotation-panel");
  let dragStart: { tokenIndex: number; x: number; y: number } | null = null;

  // Coordinates relative to the rendered SVG, independent of which inner
  // element the event targeted and of panel scrolling.
  const svgPoint = (event: MouseEvent): { x: number; y: number } | null => {
    const svg = panel.querySelector("svg");
    if (!svg) return null;
    const rect = svg.getBoundingClientRect();
    return { x: event.clientX - rect.left, y: event.clientY - rect.top };
  };

  panel.addEventListener("mousedown", (event) => {
    const { token } = annotationTarget(event);
    const point = svgPoint(event);
    if (token !== null && point) {
      dragStart = { tokenIndex: token, x: point.x, y: point.y };
      ui = state.beginDrag(ui, token);
      if (ui.options.hideArcsWhileDragging) {
        panel.classList.add("dragging");
      }
    }
  });

  panel.addEventListener("mouseup", (event) => {
    panel.classList.remove("dragging");
    const point = svgPoint(event);
    if (!dragStart || !geometry || !point) {
      dragStart = null;
      return;
    }
    const moved = Math.abs(point.x - dragStart.x) > 4 ||
      Math.abs(point.y - dragStart.y) > 4;
    const { tokenIndex } = dragStart;
    dragStart = null;
    ui = state.endDrag(ui);
    if (!moved) return; // a drop at the original position is not an edit
    const target = dragTarget(geometry, style, ROW_HEIGHT, BASELINE_OFFSET,
                              point.x, point.y);
    void applyEdit({ kind: "move_token", token_index: tokenIndex,
                     row: target.row, x: target.x });
  });

  panel.addEventListener("click", (event) => {
    const { id } = annotationTarget(event);
    if (id) {
      openPopover(id, event.pageX, event.pageY);
    } else {
      closePopover();
    }
  });

  panel.addEventListener("dblclick", (event) => {
    const { id, token } = annotationTarget(event);
    const select = id ?? (token !== null ? `@${token}` : null);
    if (select) void openTreePanel(select);
  });
}

// --- options panel ------------------------------------------------------------------

function readOptions(): ViewOptions {
  return {
    showSemantics: (el("opt-semantics") as HTMLInputElement).checked,
    showSyntax: (el("opt-syntax") as HTMLInputElement).checked,
    includeTypes: parseTypeList((el("opt-include") as HTMLInputElement).value),
    excludeTypes: parseTypeList((el("opt-exclude") as HTMLInputElement).value),
    hideArcsWhileDragging: (el("opt-drag-optimize") as HTMLInputElement).checked,
    width: null,
  };
}

function wireOptionsPanel(): void {
  for (const id of ["opt-semantics", "opt-syntax", "opt-include",
                    "opt-exclude", "opt-drag-optimize"]) {
    el(id).addEventListener("change", () => {
      ui = state.setOptions(ui, readOptions());
      if (ui.documentId) {
        (el("export-svg") as HTMLAnchorElement).href =
          api.svgUrl(ui.documentId, ui.options);
      }
      void refreshLayout();
    });
  }
  el("undo-edit").addEventListener("click", async () => {
    if (!ui.documentId) return;
    try {
      await api.undo(ui.documentId);
      await refreshLayout();
    } catch (err) {
      ui = state.failEdit(ui, err instanceof ApiError ? err.message : String(err));
      setStatus();
    }
  });
}

// --- bootstrap -----------------------------------------------------------------------

async function populateDropdown(): Promise<void> {
  const entries = await api.listDocuments();
  const dropdown = el("document-select") as HTMLSelectElement;
  dropdown.innerHTML = "";
  const placeholder = document.createElement("option");
  placeholder.value = "";
  placeholder.textContent = "choose a document...";
  dropdown.appendChild(placeholder);
  for (const entry of entries) {
    const option = document.createElement("option");
    option.value = entry.id;
    option.textContent = `${entry.id} (${entry.format})`;
    dropdown.appendChild(option);
  }
  dropdown.addEventListener("change", () => {
    if (dropdown.value) void loadDocument(dropdown.value);
  });
}

export function start(): void {
  populateDropdown().catch((err) => {
    ui = state.failEdit(ui, `cannot reach the service: ${err}`);
    setStatus();
  });
  wireAnnotationPanel();
  wirePopover();
  wireOptionsPanel();
  el("close-tree").addEventListener("click", () => {
    ui = state.closeTree(ui);
    el("tree-panel").style.display = "none";
  });
}

if (typeof document !== "undefined" && document.getElementById("annotation-panel")) {
  start();
}
