/** The browser renderer must reproduce the server's SVG exports exactly. */

import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { dragTarget, renderAnnotationSvg } from "../src/render.js";
import { renderTreeSvg } from "../src/treeview.js";
import { styleWithTaxonomy, defaultStyle } from "../src/style.js";
import type { Geometry, TaxonomyPayload, TreePayload } from "../src/types.js";

const fixture = (name: string) =>
  readFileSync(new URL(`./fixtures/${name}`, import.meta.url), "utf-8");

const geometry = JSON.parse(fixture("layout_induction.json")) as Geometry;
const taxonomy = JSON.parse(fixture("taxonomy_induction.json")) as TaxonomyPayload;
const tree = JSON.parse(fixture("tree_inhibits.json")) as TreePayload;

describe("annotation rendering", () => {
  it("is byte-identical to the server's SVG export", () => {
    const rendered = renderAnnotationSvg(geometry, styleWithTaxonomy(taxonomy));
    expect(rendered).toBe(fixture("server_render.svg"));
  });

  it("tags every annotation with a data-id exactly once", () => {
    const rendered = renderAnnotationSvg(geometry, styleWithTaxonomy(taxonomy));
    const ids = [...rendered.matchAll(/data-id="([^"]+)"/g)].map((m) => m[1]);
    const expected = new Set([
      ...geometry.mentions.map((m) => m.id),
      ...geometry.arcs.map((a) => a.id),
    ]);
    expect(new Set(ids)).toEqual(expected);
    expect(ids.length).toBe(expected.size);
  });

  it("colors typed mentions from the taxonomy", () => {
    const rendered = renderAnnotationSvg(geometry, styleWithTaxonomy(taxonomy));
    // Gene_or_gene_product inherits #4C72B0 from MacroMolecule
    const proteinLines = rendered.match(/stroke="#4C72B0"/g) ?? [];
    expect(proteinLines.length).toBe(4);
  });

  it("drops below-text arcs when the geometry has none", () => {
    const noSyntax = JSON.parse(fixture("layout_dep_nosyntax.json")) as Geometry;
    const full = JSON.parse(fixture("layout_dep_full.json")) as Geometry;
    const renderedFiltered = renderAnnotationSvg(noSyntax, defaultStyle);
    const renderedFull = renderAnnotationSvg(full, defaultStyle);
    expect(renderedFull).toContain('data-side="below"');
    expect(renderedFiltered).not.toContain('data-side="below"');
  });

  it("renders cross-row arc segments after a token drag", () => {
    const dragged = JSON.parse(fixture("layout_after_drag.json")) as Geometry;
    expect(dragged.rows.length).toBeGreaterThan(1);
    const rendered = renderAnnotationSvg(dragged, styleWithTaxonomy(taxonomy));
    const multiRowArc = dragged.arcs.find((a) => a.segments.length > 1);
    expect(multiRowArc).toBeDefined();
    const segments = [...rendered.matchAll(/class="arc-segment" data-row="(\d+)"/g)]
      .map((m) => m[1]);
    expect(new Set(segments).size).toBeGreaterThan(1);
  });
});

describe("tree rendering", () => {
  it("is byte-identical to the server's tree SVG", () => {
    const rendered = renderTreeSvg(tree, styleWithTaxonomy(taxonomy));
    expect(rendered).toBe(fixture("server_tree_render.svg"));
  });

  it("shows the two sibling events with the shared controller duplicated", () => {
    const rendered = renderTreeSvg(tree, defaultStyle);
    const refs = [...rendered.matchAll(/data-ref="([^"]+)"/g)].map((m) => m[1]);
    expect(refs.filter((r) => r === "relation:E2").length).toBe(1);
    expect(refs.filter((r) => r === "relation:E3").length).toBe(1);
    expect(refs.filter((r) => r === "relation:E1").length).toBe(2);
  });
});

describe("drag targeting", () => {
  it("maps a point back to a row and x", () => {
    const target = dragTarget(geometry, defaultStyle, 150.0, 90.0,
                              defaultStyle.padding + 40.0, 0);
    expect(target.row).toBe(0);
    expect(target.x).toBeCloseTo(40.0, 5);
  });

  it("maps a point one pitch down to the next row", () => {
    const onRowOne = dragTarget(geometry, defaultStyle, 150.0, 90.0, 20.0, 330.0);
    expect(onRowOne.row).toBeGreaterThanOrEqual(1);
  });
});
