/** UI state transitions hold no annotation content and stay consistent. */

import { describe, expect, it } from "vitest";

import * as state from "../src/state.js";
import { defaultOptions } from "../src/options.js";

describe("ui state", () => {
  it("selecting a document resets everything but options", () => {
    let ui = state.initialState;
    ui = state.setOptions(ui, { ...defaultOptions, showSyntax: false });
    ui = state.openTree(ui, "T6");
    ui = state.selectDocument(ui, "induction_p21");
    expect(ui.documentId).toBe("induction_p21");
    expect(ui.treePanelOpen).toBe(false);
    expect(ui.selected).toBeNull();
    expect(ui.options.showSyntax).toBe(false); // user options survive
  });

  it("holds only references to annotations, never content", () => {
    let ui = state.selectDocument(state.initialState, "d");
    ui = state.select(ui, { kind: "mention", id: "T1" });
    const keys = Object.keys(ui);
    expect(keys).not.toContain("mentions");
    expect(keys).not.toContain("relations");
    expect(keys).not.toContain("text");
    expect(ui.selected).toEqual({ kind: "mention", id: "T1" });
  });

  it("tree panel opens with a selection and closes clean", () => {
    let ui = state.selectDocument(state.initialState, "d");
    ui = state.openTree(ui, "@8");
    expect(ui.treePanelOpen).toBe(true);
    expect(ui.treeSelect).toBe("@8");
    ui = state.closeTree(ui);
    expect(ui.treePanelOpen).toBe(false);
    expect(ui.treeSelect).toBeNull();
  });

  it("edit lifecycle sets and clears the pending flag", () => {
    let ui = state.selectDocument(state.initialState, "d");
    ui = state.beginEdit(ui);
    expect(ui.pendingEdit).toBe(true);
    ui = state.finishEdit(ui);
    expect(ui.pendingEdit).toBe(false);
  });

  it("failed edits surface a toast and clear the pending flag", () => {
    let ui = state.beginEdit(state.selectDocument(state.initialState, "d"));
    ui = state.failEdit(ui, "CYCLE_DETECTED: nope");
    expect(ui.pendingEdit).toBe(false);
    expect(ui.toast).toContain("CYCLE_DETECTED");
    ui = state.clearToast(ui);
    expect(ui.toast).toBeNull();
  });

  it("drag begins and ends", () => {
    let ui = state.selectDocument(state.initialState, "d");
    ui = state.beginDrag(ui, 8);
    expect(ui.dragging).toEqual({ tokenIndex: 8 });
    ui = state.endDrag(ui);
    expect(ui.dragging).toBeNull();
  });
});
