/** Annotation panel rendering: layout geometry to SVG markup.
 *
 * This is a line-for-line port of the server's renderer so that what the
 * browser shows is exactly what an SVG export produces — same coordinates,
 * same attribute order, same two-decimal formatting.
 */

import type { Arc, ArcAttachment, Geometry } from "./types.js";
import { colorFor, Style } from "./style.js";

export function fmt(value: number): string {
  // Two decimals, ties to even over the double's exact expansion — the same
  // result the server's formatter produces, so renders stay byte-identical.
  const negative = value < 0;
  const expanded = Math.abs(value).toFixed(20);
  const dot = expanded.indexOf(".");
  const decimals = expanded.slice(dot + 1);
  const rest = decimals.slice(2);
  const half = "5" + "0".repeat(rest.length - 1);
  let scaled = BigInt(expanded.slice(0, dot) + decimals.slice(0, 2));
  if (rest > half || (rest === half && scaled % 2n === 1n)) {
    scaled += 1n;
  }
  const digits = scaled.toString().padStart(3, "0");
  const rendered = `${digits.slice(0, -2)}.${digits.slice(-2)}`;
  return negative && scaled !== 0n ? `-${rendered}` : rendered;
}

export function escapeText(value: string): string {
  return value.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function quoteAttr(value: string): string {
  const escaped = escapeText(value);
  if (escaped.includes('"')) {
    if (escaped.includes("'")) {
      return `"${escaped.replace(/"/g, "&quot;")}"`;
    }
    return `'${escaped}'`;
  }
  return `"${escaped}"`;
}

type Attr = [string, string];

class SvgBuilder {
  parts: string[] = [];

  add(tag: string, attrs: Attr[], text?: string): void {
    const rendered = attrs.map(([k, v]) => `${k}=${quoteAttr(v)}`).join(" ");
    if (text === undefined) {
      this.parts.push(`<${tag} ${rendered}/>`);
    } else {
      this.parts.push(`<${tag} ${rendered}>${escapeText(text)}</${tag}>`);
    }
  }

  open(tag: string, attrs: Attr[]): void {
    const rendered = attrs.map(([k, v]) => `${k}=${quoteAttr(v)}`).join(" ");
    this.parts.push(attrs.length ? `<${tag} ${rendered}>` : `<${tag}>`);
  }

  close(tag: string): void {
    this.parts.push(`</${tag}>`);
  }

  document(width: number, height: number): string {
    const header =
      '<?xml version="1.0" encoding="UTF-8"?>\n' +
      '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" ' +
      `width="${fmt(width)}" height="${fmt(height)}" ` +
      `viewBox="0 0 ${fmt(width)} ${fmt(height)}">`;
    return header + this.parts.join("") + "</svg>\n";
  }
}

function arcY(style: Style, yBaseline: number, side: string, slot: number): number {
  if (side === "above") {
    return yBaseline - style.tokenHeight - style.arcGap - slot * style.slotHeight;
  }
  return yBaseline + style.arcGap + slot * style.slotHeight;
}

function segmentPath(style: Style, segX1: number, segX2: number, runY: number,
                     leftDrop: number | null, rightDrop: number | null): string {
  const r = Math.min(style.cornerRadius, (segX2 - segX1) / 2.0);
  const up = leftDrop === null || leftDrop >= runY;
  const commands: string[] = [];
  if (leftDrop === null) {
    commands.push(`M ${fmt(segX1)} ${fmt(runY)}`);
  } else {
    commands.push(`M ${fmt(segX1)} ${fmt(leftDrop)}`);
    commands.push(`L ${fmt(segX1)} ${fmt(runY + (up ? r : -r))}`);
    commands.push(`Q ${fmt(segX1)} ${fmt(runY)} ${fmt(segX1 + r)} ${fmt(runY)}`);
  }
  if (rightDrop === null) {
    commands.push(`L ${fmt(segX2)} ${fmt(runY)}`);
  } else {
    commands.push(`L ${fmt(segX2 - r)} ${fmt(runY)}`);
    commands.push(`Q ${fmt(segX2)} ${fmt(runY)} ${fmt(segX2)} ` +
      fmt(runY + (up ? r : -r)));
    commands.push(`L ${fmt(segX2)} ${fmt(rightDrop)}`);
  }
  return commands.join(" ");
}

export function renderAnnotationSvg(geometry: Geometry, style: Style): string {
  const builder = new SvgBuilder();
  const pad = style.padding;

  let maxX = 0.0;
  let minY = 0.0;
  let maxY = style.tokenHeight * 2;
  const baselines = new Map<number, number>();
  for (const row of geometry.rows) {
    baselines.set(row.index, row.y);
    for (const box of row.tokens) {
      maxX = Math.max(maxX, box.x + box.width);
    }
    maxY = Math.max(maxY, row.y + style.tokenHeight);
  }
  for (const arc of geometry.arcs) {
    for (const segment of arc.segments) {
      const base = baselines.get(segment.row);
      if (base === undefined) continue;
      const y = arcY(style, base, arc.side, segment.slot);
      minY = Math.min(minY, y - style.slotHeight);
      maxY = Math.max(maxY, y + style.slotHeight);
      maxX = Math.max(maxX, segment.x2);
    }
  }

  const offsetX = pad;
  const offsetY = pad - Math.min(0.0, minY);
  const width = maxX + 2 * pad;
  const height = maxY - Math.min(0.0, minY) + 2 * pad;

  builder.add("rect", [["x", "0"], ["y", "0"], ["width", fmt(width)],
                       ["height", fmt(height)], ["fill", style.background]]);

  for (const row of geometry.rows) {
    const y = row.y + offsetY;
    builder.open("g", [["class", "row"], ["data-row", String(row.index)]]);
    for (const box of row.tokens) {
      builder.add(
        "text",
        [["x", fmt(box.x + offsetX)], ["y", fmt(y)],
         ["class", "token"], ["data-token", String(box.token)],
         ["font-family", style.fontFamily],
         ["font-size", fmt(style.fontSize)],
         ["fill", style.textColor]],
        box.text);
    }
    builder.close("g");
  }

  const underlineOffset = 4.0;
  const seenMentions = new Set<string>();
  for (const span of geometry.mentions) {
    const base = baselines.get(span.row);
    if (base === undefined) continue;
    const color = colorFor(style, span.type, span.layer);
    const y = base + underlineOffset + offsetY;
    const attrs: Attr[] = [
      ["x1", fmt(span.x1 + offsetX)], ["y1", fmt(y)],
      ["x2", fmt(Math.max(span.x2, span.x1 + 2.0) + offsetX)], ["y2", fmt(y)],
      ["stroke", color], ["stroke-width", "2.5"],
      ["class", "mention"],
    ];
    if (!seenMentions.has(span.id)) {
      attrs.push(["data-id", span.id]);
      seenMentions.add(span.id);
    }
    builder.add("line", attrs);
  }

  for (const arc of geometry.arcs) {
    renderArc(builder, arc, style, baselines, offsetX, offsetY);
  }

  return builder.document(width, height);
}

function renderArc(builder: SvgBuilder, arc: Arc, style: Style,
                   baselines: Map<number, number>,
                   offsetX: number, offsetY: number): void {
  const relationColor = arc.side === "above"
    ? style.semanticColor : style.syntacticColor;
  builder.open("g", [["class", "arc"], ["data-id", arc.id],
                     ["data-side", arc.side]]);

  const attachmentsByRow = new Map<number, ArcAttachment[]>();
  for (const attachment of arc.attachments) {
    const bucket = attachmentsByRow.get(attachment.row) ?? [];
    bucket.push(attachment);
    attachmentsByRow.set(attachment.row, bucket);
  }

  const rows = arc.segments.map((s) => s.row);
  const firstRow = rows.length ? Math.min(...rows) : null;
  const lastRow = rows.length ? Math.max(...rows) : null;

  for (const segment of arc.segments) {
    const base = baselines.get(segment.row);
    if (base === undefined) continue;
    const runY = arcY(style, base, arc.side, segment.slot);

    const dropY = (heightSlot: number): number => {
      if (heightSlot > 0) {
        return arcY(style, base, arc.side, heightSlot) +
          (arc.side === "above" ? 4.0 : -4.0);
      }
      if (arc.side === "above") {
        return base - style.tokenHeight - 2.0;
      }
      return base + 6.0;
    };

    const rowAttachments = (attachmentsByRow.get(segment.row) ?? [])
      .filter((a) => segment.x1 <= a.x && a.x <= segment.x2)
      .sort((a, b) => (a.x - b.x) || (a.role < b.role ? -1 : a.role > b.role ? 1 : 0));

    let leftDrop: number | null = null;
    let rightDrop: number | null = null;
    const multi = firstRow !== lastRow;
    const isFirst = segment.row === firstRow;
    const isLast = segment.row === lastRow;
    if (rowAttachments.length > 0) {
      if (!multi || isFirst) {
        const leftmost = rowAttachments.reduce(
          (best, a) => (a.x < best.x ? a : best));
        if (Math.abs(leftmost.x - segment.x1) < 1e-6) {
          leftDrop = dropY(leftmost.height);
        }
      }
      if (!multi || isLast) {
        const rightmost = rowAttachments.reduce(
          (best, a) => (a.x > best.x ? a : best));
        if (Math.abs(rightmost.x - segment.x2) < 1e-6) {
          rightDrop = dropY(rightmost.height);
        }
      }
    }
    builder.add("path", [
      ["d", segmentPath(style, segment.x1 + offsetX, segment.x2 + offsetX,
                        runY + offsetY,
                        leftDrop === null ? null : leftDrop + offsetY,
                        rightDrop === null ? null : rightDrop + offsetY)],
      ["fill", "none"], ["stroke", relationColor], ["stroke-width", "1.5"],
      ["class", "arc-segment"], ["data-row", String(segment.row)],
      ["data-slot", String(segment.slot)],
    ]);

    for (const attachment of rowAttachments) {
      const atEnd =
        (leftDrop !== null && Math.abs(attachment.x - segment.x1) < 1e-6) ||
        (rightDrop !== null && Math.abs(attachment.x - segment.x2) < 1e-6);
      if (!atEnd) {
        builder.add("path", [
          ["d", `M ${fmt(attachment.x + offsetX)} ${fmt(runY + offsetY)} ` +
                `L ${fmt(attachment.x + offsetX)} ` +
                fmt(dropY(attachment.height) + offsetY)],
          ["fill", "none"], ["stroke", relationColor],
          ["stroke-width", "1.5"], ["class", "arc-connector"],
        ]);
      }
    }
    for (const attachment of rowAttachments) {
      if (!attachment.arrow) continue;
      const tipY = dropY(attachment.height);
      const direction = arc.side === "above" ? 1.0 : -1.0;
      const x = attachment.x + offsetX;
      const y = tipY + offsetY;
      builder.add("path", [
        ["d", `M ${fmt(x)} ${fmt(y)} L ${fmt(x - 3.2)} ` +
              `${fmt(y - 5.0 * direction)} L ${fmt(x + 3.2)} ` +
              `${fmt(y - 5.0 * direction)} Z`],
        ["fill", relationColor], ["class", "arrowhead"],
      ]);
    }
  }

  const label = arc.label;
  const base = baselines.get(label.row);
  const labelSegment = arc.segments.find((s) => s.row === label.row) ?? null;
  if (base !== undefined && labelSegment !== null && label.text) {
    const runY = arcY(style, base, arc.side, labelSegment.slot);
    const cx = (label.x1 + label.x2) / 2.0;
    builder.add("rect", [
      ["x", fmt(label.x1 - 2.0 + offsetX)],
      ["y", fmt(runY - style.fontSize * 0.55 + offsetY)],
      ["width", fmt(label.x2 - label.x1 + 4.0)],
      ["height", fmt(style.fontSize * 1.1)],
      ["fill", style.background], ["class", "arc-label-box"],
    ]);
    builder.add("text", [
      ["x", fmt(cx + offsetX)],
      ["y", fmt(runY + style.fontSize * 0.32 + offsetY)],
      ["text-anchor", "middle"], ["class", "arc-label"],
      ["font-family", style.fontFamily],
      ["font-size", fmt(style.fontSize * 0.85)],
      ["fill", relationColor],
    ], label.text);
  }
  builder.close("g");
}

/** Drop target for a drag: which row and x a viewport point lands on.
 * Inverse of the renderer's offset math, quantized to the row pitch. */
export function dragTarget(geometry: Geometry, style: Style,
                           rowHeight: number, baselineOffset: number,
                           pointX: number, pointY: number):
    { row: number; x: number } {
  let minY = 0.0;
  const baselines = new Map<number, number>();
  for (const row of geometry.rows) baselines.set(row.index, row.y);
  for (const arc of geometry.arcs) {
    for (const segment of arc.segments) {
      const base = baselines.get(segment.row);
      if (base === undefined) continue;
      const y = arcY(style, base, arc.side, segment.slot);
      minY = Math.min(minY, y - style.slotHeight);
    }
  }
  const offsetY = style.padding - Math.min(0.0, minY);
  const baselineY = pointY - offsetY;
  const row = Math.max(0, Math.round((baselineY - baselineOffset) / rowHeight));
  const x = Math.max(0, pointX - style.padding);
  return { row, x };
}
