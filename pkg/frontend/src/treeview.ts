/** Tree panel rendering: summary tree JSON to layered SVG markup. */

import type { TreeNode, TreePayload } from "./types.js";
import { fmt, escapeText, quoteAttr } from "./render.js";
import { Style } from "./style.js";

const GAP_X = 24.0;
const LEVEL_HEIGHT = 64.0;

interface Placed {
  x: number;
  y: number;
  node: TreeNode;
}

function nodeWidth(style: Style, node: TreeNode): number {
  return Math.max(30.0, style.fontSize * 0.62 * node.label.length + 16.0);
}

function refString(node: TreeNode): string {
  const ref = node.ref as Record<string, unknown>;
  for (const kind of ["token", "mention", "relation"]) {
    if (ref[kind] !== undefined && ref[kind] !== null) {
      return `${kind}:${ref[kind]}`;
    }
  }
  return "unknown";
}

export function renderTreeSvg(tree: TreePayload, style: Style): string {
  const positions = new Map<number, Placed>();
  let counter = 0;
  let cursor = 0.0;

  const place = (node: TreeNode, depth: number): number => {
    const index = counter++;
    let x: number;
    if (node.children.length === 0) {
      x = cursor + nodeWidth(style, node) / 2.0;
      cursor += nodeWidth(style, node) + GAP_X;
    } else {
      const centers = node.children.map(({ node: child }) =>
        positions.get(place(child, depth + 1))!.x);
      x = centers.reduce((a, b) => a + b, 0) / centers.length;
    }
    positions.set(index, { x, y: depth * LEVEL_HEIGHT, node });
    return index;
  };
  place(tree.root, 0);

  const edges: [number, number, string][] = [];
  let counter2 = 0;
  const walk = (node: TreeNode): number => {
    const index = counter2++;
    for (const { role, node: child } of node.children) {
      const childIndex = walk(child);
      edges.push([index, childIndex, role]);
    }
    return index;
  };
  walk(tree.root);

  let width = cursor;
  for (const placed of positions.values()) {
    width = Math.max(width, placed.x + nodeWidth(style, placed.node) / 2.0);
  }
  let depthMax = 0;
  for (const placed of positions.values()) depthMax = Math.max(depthMax, placed.y);
  const height = depthMax + LEVEL_HEIGHT;
  const pad = style.padding;

  const parts: string[] = [];
  const attr = (k: string, v: string) => `${k}=${quoteAttr(v)}`;
  parts.push(`<rect ${attr("x", "0")} ${attr("y", "0")} ` +
    `${attr("width", fmt(width + 2 * pad))} ` +
    `${attr("height", fmt(height + 2 * pad))} ` +
    `${attr("fill", style.background)}/>`);

  edges.sort((a, b) => a[0] - b[0] || a[1] - b[1]);
  for (const [parentIndex, childIndex, role] of edges) {
    const p = positions.get(parentIndex)!;
    const c = positions.get(childIndex)!;
    parts.push(`<line ${attr("x1", fmt(p.x + pad))} ` +
      `${attr("y1", fmt(p.y + pad + 14.0))} ` +
      `${attr("x2", fmt(c.x + pad))} ${attr("y2", fmt(c.y + pad - 14.0))} ` +
      `${attr("stroke", style.syntacticColor)} ${attr("stroke-width", "1.2")} ` +
      `${attr("class", "tree-edge")}/>`);
    parts.push(`<text ${attr("x", fmt((p.x + c.x) / 2.0 + pad))} ` +
      `${attr("y", fmt((p.y + c.y) / 2.0 + pad))} ` +
      `${attr("text-anchor", "middle")} ${attr("class", "tree-edge-role")} ` +
      `${attr("font-family", style.fontFamily)} ` +
      `${attr("font-size", fmt(style.fontSize * 0.75))} ` +
      `${attr("fill", style.syntacticColor)}>${escapeText(role)}</text>`);
  }

  const indices = [...positions.keys()].sort((a, b) => a - b);
  for (const index of indices) {
    const { x, y, node } = positions.get(index)!;
    const w = nodeWidth(style, node);
    const isRelation = (node.ref as Record<string, unknown>).relation !== undefined
      && (node.ref as Record<string, unknown>).relation !== null;
    const color = isRelation ? style.semanticColor : style.textColor;
    parts.push(`<rect ${attr("x", fmt(x - w / 2.0 + pad))} ` +
      `${attr("y", fmt(y - 14.0 + pad))} ${attr("width", fmt(w))} ` +
      `${attr("height", "28.00")} ${attr("rx", "6.00")} ` +
      `${attr("fill", style.background)} ${attr("stroke", color)} ` +
      `${attr("stroke-width", "1.2")} ${attr("class", "tree-node")} ` +
      `${attr("data-ref", refString(node))}/>`);
    parts.push(`<text ${attr("x", fmt(x + pad))} ` +
      `${attr("y", fmt(y + style.fontSize * 0.32 + pad))} ` +
      `${attr("text-anchor", "middle")} ${attr("class", "tree-node-label")} ` +
      `${attr("font-family", style.fontFamily)} ` +
      `${attr("font-size", fmt(style.fontSize * 0.85))} ` +
      `${attr("fill", color)}>${escapeText(node.label)}</text>`);
  }

  const totalWidth = width + 2 * pad;
  const totalHeight = height + 2 * pad;
  return '<?xml version="1.0" encoding="UTF-8"?>\n' +
    '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" ' +
    `width="${fmt(totalWidth)}" height="${fmt(totalHeight)}" ` +
    `viewBox="0 0 ${fmt(totalWidth)} ${fmt(totalHeight)}">` +
    parts.join("") + "</svg>\n";
}
