/** Options panel mapping onto request parameters. */

import { describe, expect, it } from "vitest";

import { defaultOptions, layoutParams, parseTypeList } from "../src/options.js";

describe("options", () => {
  it("defaults produce no parameters", () => {
    expect(layoutParams(defaultOptions).toString()).toBe("");
  });

  it("layer toggles map to semantics and syntax flags", () => {
    const params = layoutParams({
      ...defaultOptions, showSemantics: false, showSyntax: false,
    });
    expect(params.get("semantics")).toBe("false");
    expect(params.get("syntax")).toBe("false");
  });

  it("type filters join with commas", () => {
    const params = layoutParams({
      ...defaultOptions,
      includeTypes: ["Gene_or_gene_product"],
      excludeTypes: ["Negative_regulation", "Positive_activation"],
    });
    expect(params.get("include")).toBe("Gene_or_gene_product");
    expect(params.get("exclude")).toBe("Negative_regulation,Positive_activation");
  });

  it("toggling a filter on and off restores the previous request", () => {
    const base = layoutParams(defaultOptions).toString();
    const withFilter = { ...defaultOptions, excludeTypes: ["X"] };
    const reverted = { ...withFilter, excludeTypes: [] };
    expect(layoutParams(withFilter).toString()).not.toBe(base);
    expect(layoutParams(reverted).toString()).toBe(base);
  });

  it("parses messy type lists", () => {
    expect(parseTypeList(" a, b ,, c ")).toEqual(["a", "b", "c"]);
    expect(parseTypeList("")).toEqual([]);
  });

  it("hide-arcs-while-dragging never reaches the wire", () => {
    const params = layoutParams({
      ...defaultOptions, hideArcsWhileDragging: false,
    });
    expect(params.toString()).toBe("");
  });
});
