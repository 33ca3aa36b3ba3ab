/** UI state and its pure transitions.
 *
 * The state holds no annotation content: the service's document is the
 * single source of truth, and everything here is selection, panel
 * visibility, and in-flight bookkeeping that a page reload may discard.
 */

import type { ViewOptions } from "./options.js";
import { defaultOptions } from "./options.js";

export interface Selection {
  kind: "token" | "mention" | "relation";
  id: string; // "@N" for tokens
}

export interface UiState {
  documentId: string | null;
  options: ViewOptions;
  selected: Selection | null;
  treePanelOpen: boolean;
  treeSelect: string | null;
  pendingEdit: boolean;
  dragging: { tokenIndex: number } | null;
  toast: string | null;
}

export const initialState: UiState = {
  documentId: null,
  options: defaultOptions,
  selected: null,
  treePanelOpen: false,
  treeSelect: null,
  pendingEdit: false,
  dragging: null,
  toast: null,
};

export function selectDocument(state: UiState, documentId: string): UiState {
  return {
    ...initialState,
    documentId,
    options: state.options,
  };
}

export function select(state: UiState, selection: Selection | null): UiState {
  return { ...state, selected: selection };
}

export function openTree(state: UiState, selectId: string): UiState {
  return { ...state, treePanelOpen: true, treeSelect: selectId };
}

export function closeTree(state: UiState): UiState {
  return { ...state, treePanelOpen: false, treeSelect: null };
}

export function setOptions(state: UiState, options: ViewOptions): UiState {
  return { ...state, options };
}

export function beginEdit(state: UiState): UiState {
  return { ...state, pendingEdit: true };
}

export function finishEdit(state: UiState): UiState {
  return { ...state, pendingEdit: false };
}

export function failEdit(state: UiState, message: string): UiState {
  return { ...state, pendingEdit: false, toast: message };
}

export function clearToast(state: UiState): UiState {
  return { ...state, toast: null };
}

export function beginDrag(state: UiState, tokenIndex: number): UiState {
  return { ...state, dragging: { tokenIndex } };
}

export function endDrag(state: UiState): UiState {
  return { ...state, dragging: null };
}
