/**
 * SVG canvas rendering for the editor.
 *
 * The drawing mirrors the service's SVG export: children are drawn inside
 * (above) their parents, objects iterate by id, coordinates carry at most
 * six decimals, each node contributes one shape, each edge one
 * center-to-center line, each compound one label text in its bottom
 * strip, and arrow markers live in defs keyed by color.  The canvas draws
 * in world coordinates and leaves pan and zoom to the viewBox, which is
 * the one place it diverges from the export's scale factor.
 *
 * On top of the export conventions the canvas tags every element with the
 * model id it depicts (data-node-id / data-edge-id) and draws selection
 * outlines last, so interaction code can map DOM hits back to the model.
 */

import { Rect, rect, rectCenter, rectUnion } from "./geometry.js";
import { GraphModel } from "./model.js";
import { formatSix } from "./numfmt.js";

export const VIEWBOX_PADDING = 20.0;
export const ARROW_SIZE = 8.0;
export const DEFAULT_HIGHLIGHT = "#ff0000";
export const SELECTION_COLOR = "#3b82f6";

const SVG_NS = "http://www.w3.org/2000/svg";

export interface RenderOptions {
  viewBox: Rect;
  selection?: ReadonlySet<number>;
  highlightColor?: string;
}

/** The export's framing: the union of all node bounds plus padding. */
export function contentViewBox(model: GraphModel): Rect {
  const rects = [...model.nodes.values()].map((n) => n.bounds);
  const box = rects.length > 0 ? rectUnion(rects) : rect(0, 0, 0, 0);
  return rect(box.x - VIEWBOX_PADDING, box.y - VIEWBOX_PADDING, box.w + 2 * VIEWBOX_PADDING, box.h + 2 * VIEWBOX_PADDING);
}

function el(tag: string, attrs: Record<string, string>): Element {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [name, value] of Object.entries(attrs)) {
    node.setAttribute(name, value);
  }
  return node;
}

function markerDefs(model: GraphModel): Element | null {
  const colors = new Set<string>();
  for (const edge of model.edges.values()) {
    if (edge.style.arrow !== "none") {
      colors.add(edge.style.borderColor);
      if (model.highlight.has(edge.id)) {
        colors.add(DEFAULT_HIGHLIGHT);
      }
    }
  }
  if (colors.size === 0) {
    return null;
  }
  const defs = document.createElementNS(SVG_NS, "defs");
  for (const color of [...colors].sort()) {
    const marker = el("marker", {
      id: `arrow-${color.replace(/^#+/, "")}`,
      markerWidth: formatSix(ARROW_SIZE),
      markerHeight: formatSix(ARROW_SIZE),
      refX: formatSix(ARROW_SIZE - 1),
      refY: formatSix(ARROW_SIZE / 2),
      orient: "auto",
      markerUnits: "userSpaceOnUse",
    });
    marker.appendChild(
      el("path", {
        d: `M0,0 L${formatSix(ARROW_SIZE)},${formatSix(ARROW_SIZE / 2)} L0,${formatSix(ARROW_SIZE)} z`,
        fill: color,
      }),
    );
    defs.appendChild(marker);
  }
  return defs;
}

function appendGraph(svg: SVGSVGElement, model: GraphModel, graphId: number, highlightColor: string): void {
  const graph = model.graphs.get(graphId)!;
  for (const nodeId of [...graph.nodes].sort((a, b) => a - b)) {
    const node = model.nodes.get(nodeId)!;
    const stroke = model.highlight.has(node.id) ? highlightColor : node.style.borderColor;
    const { x, y, w, h } = node.bounds;
    const common: Record<string, string> = {
      fill: node.style.fillColor,
      stroke,
      "stroke-width": formatSix(node.style.width),
      "data-node-id": String(node.id),
    };
    if (node.style.lineStyle === "dashed") {
      common["stroke-dasharray"] = "6 3";
    }
    let shape: Element;
    if (node.shape === "ellipse") {
      shape = el("ellipse", {
        cx: formatSix(x + w / 2),
        cy: formatSix(y + h / 2),
        rx: formatSix(w / 2),
        ry: formatSix(h / 2),
        ...common,
      });
    } else if (node.shape === "triangle") {
      shape = el("polygon", {
        points: `${formatSix(x + w / 2)},${formatSix(y)} ${formatSix(x + w)},${formatSix(y + h)} ${formatSix(x)},${formatSix(y + h)}`,
        ...common,
      });
    } else {
      shape = el("rect", {
        x: formatSix(x),
        y: formatSix(y),
        width: formatSix(w),
        height: formatSix(h),
        ...common,
      });
    }
    svg.appendChild(shape);
    if (node.childGraph !== null) {
      const strip = model.graphs.get(node.childGraph)!.labelStrip;
      const text = el("text", {
        x: formatSix(x + w / 2),
        y: formatSix(y + h - strip / 4),
        "text-anchor": "middle",
        "font-size": formatSix(Math.max(strip - 2, 1.0)),
        fill: stroke,
        "data-node-id": String(node.id),
        "data-label-for": String(node.id),
      });
      text.textContent = node.label;
      svg.appendChild(text);
      appendGraph(svg, model, node.childGraph, highlightColor);
    }
  }
}

function appendEdges(svg: SVGSVGElement, model: GraphModel, highlightColor: string): void {
  for (const edgeId of [...model.edges.keys()].sort((a, b) => a - b)) {
    const edge = model.edges.get(edgeId)!;
    const highlighted = model.highlight.has(edge.id);
    const color = highlighted ? highlightColor : edge.style.borderColor;
    const [x1, y1] = rectCenter(model.nodes.get(edge.source)!.bounds);
    const [x2, y2] = rectCenter(model.nodes.get(edge.target)!.bounds);
    const attrs: Record<string, string> = {
      x1: formatSix(x1),
      y1: formatSix(y1),
      x2: formatSix(x2),
      y2: formatSix(y2),
      stroke: color,
      "stroke-width": formatSix(edge.style.width),
      "data-edge-id": String(edge.id),
    };
    if (edge.style.lineStyle === "dashed") {
      attrs["stroke-dasharray"] = "6 3";
    }
    const markerColor = highlighted ? highlightColor : edge.style.borderColor;
    const name = `arrow-${markerColor.replace(/^#+/, "")}`;
    if (edge.style.arrow === "target" || edge.style.arrow === "both") {
      attrs["marker-end"] = `url(#${name})`;
    }
    if (edge.style.arrow === "source" || edge.style.arrow === "both") {
      attrs["marker-start"] = `url(#${name})`;
    }
    svg.appendChild(el("line", attrs));
  }
}

function appendSelection(svg: SVGSVGElement, model: GraphModel, selection: ReadonlySet<number>): void {
  for (const objectId of [...selection].sort((a, b) => a - b)) {
    const node = model.nodes.get(objectId);
    if (node !== undefined) {
      const { x, y, w, h } = node.bounds;
      svg.appendChild(
        el("rect", {
          x: formatSix(x - 2),
          y: formatSix(y - 2),
          width: formatSix(w + 4),
          height: formatSix(h + 4),
          fill: "none",
          stroke: SELECTION_COLOR,
          "stroke-width": "1",
          "stroke-dasharray": "4 2",
          "pointer-events": "none",
          "data-selection-for": String(objectId),
        }),
      );
      continue;
    }
    const edge = model.edges.get(objectId);
    if (edge !== undefined) {
      const [x1, y1] = rectCenter(model.nodes.get(edge.source)!.bounds);
      const [x2, y2] = rectCenter(model.nodes.get(edge.target)!.bounds);
      svg.appendChild(
        el("line", {
          x1: formatSix(x1),
          y1: formatSix(y1),
          x2: formatSix(x2),
          y2: formatSix(y2),
          stroke: SELECTION_COLOR,
          "stroke-width": formatSix(edge.style.width + 3),
          opacity: "0.35",
          "pointer-events": "none",
          "data-selection-for": String(objectId),
        }),
      );
    }
  }
}

/** Redraw the whole document into the given <svg> element. */
export function renderCanvas(svg: SVGSVGElement, model: GraphModel, opts: RenderOptions): void {
  while (svg.firstChild !== null) {
    svg.removeChild(svg.firstChild);
  }
  const v = opts.viewBox;
  svg.setAttribute("viewBox", `${formatSix(v.x)} ${formatSix(v.y)} ${formatSix(v.w)} ${formatSix(v.h)}`);
  const highlightColor = opts.highlightColor ?? DEFAULT_HIGHLIGHT;
  const defs = markerDefs(model);
  if (defs !== null) {
    svg.appendChild(defs);
  }
  appendGraph(svg, model, model.root, highlightColor);
  appendEdges(svg, model, highlightColor);
  appendSelection(svg, model, opts.selection ?? new Set());
}
