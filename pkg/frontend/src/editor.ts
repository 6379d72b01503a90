/**
 * Editor document: a client-side mirror of the graph model plus selection,
 * viewport, and the editing actions the toolbar and canvas invoke.
 *
 * The document is the single mutable thing in the editor.  Every action
 * either mutates the model through its invariant-preserving operations and
 * reports success, or refuses with a status message and leaves the model
 * untouched — including every action invoked with an empty or unsuitable
 * selection.  Layout never happens here: run() posts the document to the
 * service, and only geometry is adopted from the response, so topology
 * cannot change while a layout request is in flight (edits are refused
 * until the response lands, and the UI disables the button).
 *
 * Serialization discipline: after a layout the service's response text is
 * kept verbatim and returned by save() as long as no edit has touched the
 * model since, so a saved file is byte-identical to what the service (and
 * the CLI, given the same inputs) produced.  Any local edit invalidates
 * the kept text and save() falls back to the local canonical writer,
 * which produces the same bytes for equal models.
 */

import { LayoutService, ServiceError, ServiceViolation, LayoutReport } from "./api.js";
import { Rect, copyRect, rect } from "./geometry.js";
import {
  ArrowStyle,
  GraphModel,
  LineStyle,
  ModelError,
  NodeShape,
  DEFAULT_NODE_H,
  DEFAULT_NODE_W,
} from "./model.js";
import { GraphMLError, parseGraphml, writeGraphml } from "./graphml.js";
import { contentViewBox } from "./render.js";

export interface Viewport {
  panX: number;
  panY: number;
  zoom: number;
}

/** Map a point in canvas pixels to world coordinates under a viewport. */
export function screenToWorld(viewport: Viewport, px: number, py: number): [number, number] {
  return [viewport.panX + px / viewport.zoom, viewport.panY + py / viewport.zoom];
}

/**
 * Bounds the layout places directly: leaves, plus empty compounds (their
 * box is fixed but their position is free).  All other compound bounds
 * are derived, so this is exactly the geometry worth snapshotting.
 */
export function movableBounds(model: GraphModel): Map<number, Rect> {
  const out = new Map<number, Rect>();
  for (const node of model.nodes.values()) {
    if (node.childGraph === null || model.graphs.get(node.childGraph)!.nodes.length === 0) {
      out.set(node.id, copyRect(node.bounds));
    }
  }
  return out;
}

/** Restore a movable-bounds snapshot exactly and re-derive the compounds. */
export function applyBounds(model: GraphModel, bounds: Map<number, Rect>): void {
  for (const [nodeId, b] of bounds) {
    const node = model.nodes.get(nodeId);
    if (node !== undefined) {
      node.bounds = copyRect(b);
    }
  }
  model.retightenAll();
}

/**
 * Set every movable bound to the linear blend of two snapshots and
 * re-derive the compounds, so mid-animation frames are valid documents.
 * At t = 1 the target values are adopted exactly, not recomputed.
 */
export function lerpBounds(model: GraphModel, from: Map<number, Rect>, to: Map<number, Rect>, t: number): void {
  if (t >= 1) {
    applyBounds(model, to);
    return;
  }
  for (const [nodeId, target] of to) {
    const node = model.nodes.get(nodeId);
    const start = from.get(nodeId);
    if (node === undefined || start === undefined) {
      continue;
    }
    node.bounds = rect(
      start.x + (target.x - start.x) * t,
      start.y + (target.y - start.y) * t,
      start.w + (target.w - start.w) * t,
      start.h + (target.h - start.h) * t,
    );
  }
  model.retightenAll();
}

export interface LayoutRun {
  report: LayoutReport;
  /** Geometry before and after, for the presentation tween. */
  from: Map<number, Rect>;
  to: Map<number, Rect>;
}

export interface StyleChange {
  fillColor?: string;
  borderColor?: string;
  lineStyle?: LineStyle;
  arrow?: ArrowStyle;
  width?: number;
  shape?: NodeShape;
}

/** The open document: model mirror, selection, viewport, and actions. */
export class EditorDocument {
  model = new GraphModel();
  /** Always a subset of existing object ids; insertion order is kept. */
  selection = new Set<number>();
  viewport: Viewport = { panX: -20, panY: -20, zoom: 1 };

  /** One-line feedback for the status bar; every action writes it. */
  status = "";
  /** Violation list for the banner; null when the last open was clean. */
  banner: ServiceViolation[] | null = null;

  layoutInFlight = false;
  lastReport: LayoutReport | null = null;

  private client: LayoutService | null;
  private canonicalText: string | null = null;
  private revertTo: Map<number, Rect> | null = null;
  private listeners: (() => void)[] = [];

  constructor(client: LayoutService | null = null) {
    this.client = client;
  }

  /** Point the document at a (different) service instance. */
  setClient(client: LayoutService | null): void {
    this.client = client;
  }

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  private changed(): void {
    for (const listener of this.listeners) {
      listener();
    }
  }

  private report(status: string): void {
    this.status = status;
    this.changed();
  }

  /** Put a message on the status line (used by interaction wiring). */
  announce(message: string): void {
    this.report(message);
  }

  /** True when the document may be edited; reports why when it may not. */
  private editable(): boolean {
    if (this.layoutInFlight) {
      this.report("a layout is running; the document is read-only until it finishes");
      return false;
    }
    return true;
  }

  /** Any local mutation invalidates the service-written serialization. */
  private touched(): void {
    this.canonicalText = null;
  }

  private selectedNodes(): number[] {
    return [...this.selection].filter((id) => this.model.nodes.has(id));
  }

  // ------------------------------------------------------------------
  // opening and saving

  /**
   * Replace the document with the parsed file.  When a service client is
   * attached the text goes through POST /validate first, so the banner
   * carries the service's own violation list for bad files; the current
   * document survives any failure.
   */
  async open(text: string): Promise<boolean> {
    if (this.client !== null) {
      try {
        await this.client.validate(text);
      } catch (exc) {
        if (exc instanceof ServiceError && exc.status !== 0) {
          this.banner = exc.violations ?? [{ object: null, rule: "service", message: exc.message }];
          this.report(`file rejected: ${exc.message}`);
          return false;
        }
        // Service unreachable: fall through to the local parser.
      }
    }
    let model: GraphModel;
    try {
      model = parseGraphml(text);
    } catch (exc) {
      if (exc instanceof GraphMLError) {
        this.banner = [{ object: null, rule: "parse", message: exc.message }];
        this.report(`file rejected: ${exc.message}`);
        return false;
      }
      throw exc;
    }
    this.model = model;
    this.selection.clear();
    this.banner = null;
    this.canonicalText = null;
    this.revertTo = null;
    this.lastReport = null;
    const box = contentViewBox(model);
    this.viewport.panX = box.x;
    this.viewport.panY = box.y;
    this.report(`opened document: ${model.nodes.size} nodes, ${model.edges.size} edges`);
    return true;
  }

  /**
   * Canonical GraphML for the document: the service's own text while the
   * model is untouched since the last layout, the local writer otherwise.
   */
  save(): string {
    return this.canonicalText ?? writeGraphml(this.model);
  }

  // ------------------------------------------------------------------
  // selection and viewport

  select(objectId: number, toggle = false): void {
    if (!this.model.nodes.has(objectId) && !this.model.edges.has(objectId)) {
      return;
    }
    if (toggle) {
      if (this.selection.has(objectId)) {
        this.selection.delete(objectId);
      } else {
        this.selection.add(objectId);
      }
    } else {
      this.selection.clear();
      this.selection.add(objectId);
    }
    this.report(this.selection.size === 0 ? "selection cleared" : `selected ${[...this.selection].join(", ")}`);
  }

  clearSelection(): void {
    if (this.selection.size > 0) {
      this.selection.clear();
    }
    this.report("selection cleared");
  }

  /** Drop selected ids that no longer exist, keeping the subset invariant. */
  private pruneSelection(): void {
    for (const id of [...this.selection]) {
      if (!this.model.nodes.has(id) && !this.model.edges.has(id)) {
        this.selection.delete(id);
      }
    }
  }

  setZoom(zoom: number): void {
    if (!Number.isFinite(zoom) || zoom <= 0) {
      this.report("zoom must be a positive number");
      return;
    }
    this.viewport.zoom = zoom;
    this.report(`zoom ${Math.round(zoom * 100)}%`);
  }

  zoomBy(factor: number): void {
    this.setZoom(this.viewport.zoom * factor);
  }

  panBy(dx: number, dy: number): void {
    this.viewport.panX += dx;
    this.viewport.panY += dy;
    this.changed();
  }

  // ------------------------------------------------------------------
  // edit actions

  addNode(x: number, y: number): number | null {
    if (!this.editable()) {
      return null;
    }
    const nodeId = this.model.addNode(null, { bounds: rect(x, y, DEFAULT_NODE_W, DEFAULT_NODE_H) });
    this.touched();
    this.selection.clear();
    this.selection.add(nodeId);
    this.report(`added node ${nodeId}`);
    return nodeId;
  }

  /** Connect the two selected nodes, first selected as the source. */
  connectSelection(): number | null {
    if (!this.editable()) {
      return null;
    }
    const nodes = this.selectedNodes();
    if (nodes.length !== 2 || this.selection.size !== 2) {
      this.report("select exactly two nodes to connect");
      return null;
    }
    const edgeId = this.model.addEdge(nodes[0], nodes[1]);
    this.touched();
    this.report(`added edge ${edgeId}: ${nodes[0]} → ${nodes[1]}`);
    return edgeId;
  }

  deleteSelection(): void {
    if (!this.editable()) {
      return;
    }
    if (this.selection.size === 0) {
      this.report("nothing selected to delete");
      return;
    }
    let removed = 0;
    for (const id of [...this.selection]) {
      // A compound earlier in the selection may have taken this id with it.
      if (this.model.nodes.has(id) || this.model.edges.has(id)) {
        this.model.remove(id);
        removed += 1;
      }
    }
    this.touched();
    this.selection.clear();
    this.pruneSelection();
    this.report(`deleted ${removed} object${removed === 1 ? "" : "s"}`);
  }

  /** Shift one node (a compound carries its subtree) by a world delta. */
  dragBy(nodeId: number, dx: number, dy: number): void {
    if (!this.editable()) {
      return;
    }
    if (!this.model.nodes.has(nodeId)) {
      this.report(`unknown node ${nodeId}`);
      return;
    }
    this.model.translate(nodeId, dx, dy);
    this.touched();
    this.changed();
  }

  /** Shift every selected node; nodes inside a selected compound ride along once. */
  moveSelectionBy(dx: number, dy: number): void {
    if (!this.editable()) {
      return;
    }
    const nodes = this.selectedNodes();
    if (nodes.length === 0) {
      this.report("nothing selected to move");
      return;
    }
    const chosen = new Set(nodes);
    for (const nodeId of nodes) {
      let ancestorSelected = false;
      let graph = this.model.graphs.get(this.model.nodes.get(nodeId)!.ownerGraph)!;
      while (graph.parentNode !== null) {
        if (chosen.has(graph.parentNode)) {
          ancestorSelected = true;
          break;
        }
        graph = this.model.graphs.get(this.model.nodes.get(graph.parentNode)!.ownerGraph)!;
      }
      if (!ancestorSelected) {
        this.model.translate(nodeId, dx, dy);
      }
    }
    this.touched();
    this.report(`moved ${nodes.length} node${nodes.length === 1 ? "" : "s"}`);
  }

  resizeSelection(w: number, h: number): void {
    if (!this.editable()) {
      return;
    }
    const nodes = this.selectedNodes();
    if (nodes.length !== 1 || this.selection.size !== 1) {
      this.report("select exactly one node to resize");
      return;
    }
    try {
      this.model.resize(nodes[0], w, h);
    } catch (exc) {
      if (exc instanceof ModelError) {
        this.report(exc.message);
        return;
      }
      throw exc;
    }
    this.touched();
    this.report(`resized node ${nodes[0]} to ${w} × ${h}`);
  }

  /** Group the selected nodes of one graph under a new compound. */
  groupSelection(label = ""): number | null {
    if (!this.editable()) {
      return null;
    }
    const nodes = this.selectedNodes();
    if (nodes.length === 0) {
      this.report("nothing selected to group");
      return null;
    }
    const ownerGraph = this.model.nodes.get(nodes[0])!.ownerGraph;
    let compoundId: number;
    try {
      compoundId = this.model.makeCompound(ownerGraph, nodes, label);
    } catch (exc) {
      if (exc instanceof ModelError) {
        this.report(exc.message);
        return null;
      }
      throw exc;
    }
    this.touched();
    this.selection.clear();
    this.selection.add(compoundId);
    this.report(`grouped ${nodes.length} node${nodes.length === 1 ? "" : "s"} into compound ${compoundId}`);
    return compoundId;
  }

  setLabel(label: string): void {
    if (!this.editable()) {
      return;
    }
    if (this.selection.size !== 1) {
      this.report("select exactly one object to relabel");
      return;
    }
    const [objectId] = this.selection;
    const target = this.model.nodes.get(objectId) ?? this.model.edges.get(objectId);
    if (target === undefined) {
      return;
    }
    target.label = label;
    this.touched();
    this.report(`set label of ${objectId}`);
  }

  /** Apply inspector fields to every selected object they make sense for. */
  setStyle(change: StyleChange): void {
    if (!this.editable()) {
      return;
    }
    if (this.selection.size === 0) {
      this.report("nothing selected to style");
      return;
    }
    if (change.width !== undefined && (!Number.isFinite(change.width) || change.width <= 0)) {
      this.report("stroke width must be positive");
      return;
    }
    for (const objectId of this.selection) {
      const node = this.model.nodes.get(objectId);
      if (node !== undefined) {
        if (change.fillColor !== undefined) {
          node.style.fillColor = change.fillColor;
        }
        if (change.borderColor !== undefined) {
          node.style.borderColor = change.borderColor;
        }
        if (change.lineStyle !== undefined) {
          node.style.lineStyle = change.lineStyle;
        }
        if (change.width !== undefined) {
          node.style.width = change.width;
        }
        if (change.shape !== undefined) {
          node.shape = change.shape;
        }
        continue;
      }
      const edge = this.model.edges.get(objectId);
      if (edge !== undefined) {
        if (change.borderColor !== undefined) {
          edge.style.borderColor = change.borderColor;
        }
        if (change.lineStyle !== undefined) {
          edge.style.lineStyle = change.lineStyle;
        }
        if (change.arrow !== undefined) {
          edge.style.arrow = change.arrow;
        }
        if (change.width !== undefined) {
          edge.style.width = change.width;
        }
      }
    }
    this.touched();
    this.report(`styled ${this.selection.size} object${this.selection.size === 1 ? "" : "s"}`);
  }

  /** Emphasize the selection; a fully highlighted selection toggles back off. */
  highlightSelection(): void {
    if (!this.editable()) {
      return;
    }
    if (this.selection.size === 0) {
      this.report("nothing selected to highlight");
      return;
    }
    const allOn = [...this.selection].every((id) => this.model.highlight.has(id));
    for (const id of this.selection) {
      if (allOn) {
        this.model.highlight.delete(id);
      } else {
        this.model.highlight.add(id);
      }
    }
    this.touched();
    this.report(allOn ? "highlight removed" : `highlighted ${this.selection.size} object${this.selection.size === 1 ? "" : "s"}`);
  }

  // ------------------------------------------------------------------
  // layout

  /**
   * Post the document to /layout and adopt the returned geometry.  The
   * model's topology is never touched; on any failure the document stays
   * exactly as it was and the error lands in the status line.  Returns
   * the before/after geometry for the caller's presentation tween.
   */
  async runLayout(
    algorithm: string,
    opts: { seed?: number; options?: Record<string, number> } = {},
  ): Promise<LayoutRun | null> {
    if (this.client === null) {
      this.report("no layout service configured");
      return null;
    }
    if (this.layoutInFlight) {
      this.report("a layout is already running");
      return null;
    }
    this.layoutInFlight = true;
    this.changed();
    try {
      const text = this.save();
      const result = await this.client.layout(text, algorithm, opts);
      let laidOut: GraphModel;
      try {
        laidOut = parseGraphml(result.graphml);
      } catch (exc) {
        this.report(`layout response unusable: ${exc instanceof Error ? exc.message : String(exc)}`);
        return null;
      }
      const from = movableBounds(this.model);
      const to = movableBounds(laidOut);
      const sameNodes = from.size === to.size && [...to.keys()].every((nodeId) => from.has(nodeId));
      if (!sameNodes) {
        this.report("layout response does not match the document");
        return null;
      }
      this.revertTo = from;
      applyBounds(this.model, to);
      this.canonicalText = result.graphml;
      this.lastReport = result.report;
      this.report(`${algorithm} finished: ${result.report.iterations_used} iterations`);
      return { report: result.report, from, to };
    } catch (exc) {
      if (exc instanceof ServiceError) {
        this.report(`layout failed: ${exc.message}`);
        return null;
      }
      throw exc;
    } finally {
      this.layoutInFlight = false;
      this.changed();
    }
  }

  /** Put every node back where it was before the last layout (one step). */
  revertLayout(): void {
    if (!this.editable()) {
      return;
    }
    if (this.revertTo === null) {
      this.report("no layout to revert");
      return;
    }
    applyBounds(this.model, this.revertTo);
    this.revertTo = null;
    this.touched();
    this.report("layout reverted");
  }
}

// ----------------------------------------------------------------------
// canvas interactions

interface DragState {
  nodeId: number;
  lastX: number;
  lastY: number;
  moved: boolean;
}

function hitId(target: EventTarget | null, attr: string): number | null {
  if (!(target instanceof Element)) {
    return null;
  }
  const hit = target.closest(`[${attr}]`);
  if (hit === null) {
    return null;
  }
  return parseInt(hit.getAttribute(attr)!, 10);
}

/**
 * Wire mouse selection and drag-to-move onto a rendered canvas.  Clicking
 * an object selects it (shift toggles), the background clears, and
 * dragging a node moves it — a compound rigidly carries its subtree, the
 * model re-tightens ancestors, and every repaint reflects the move.
 */
export function attachCanvasInteractions(doc: EditorDocument, svg: SVGSVGElement): void {
  let drag: DragState | null = null;

  const toWorld = (event: MouseEvent): [number, number] => {
    const frame = svg.getBoundingClientRect();
    return screenToWorld(doc.viewport, event.clientX - frame.left, event.clientY - frame.top);
  };

  svg.addEventListener("mousedown", (event) => {
    if (event.button !== 0) {
      return;
    }
    const nodeId = hitId(event.target, "data-node-id");
    const edgeId = nodeId === null ? hitId(event.target, "data-edge-id") : null;
    if (nodeId !== null) {
      if (event.shiftKey) {
        doc.select(nodeId, true);
      } else if (!doc.selection.has(nodeId)) {
        doc.select(nodeId);
      }
      const [wx, wy] = toWorld(event);
      drag = { nodeId, lastX: wx, lastY: wy, moved: false };
    } else if (edgeId !== null) {
      doc.select(edgeId, event.shiftKey);
    } else {
      doc.clearSelection();
    }
  });

  const owner = svg.ownerDocument;
  owner.addEventListener("mousemove", (event) => {
    if (drag === null) {
      return;
    }
    const [wx, wy] = toWorld(event);
    const dx = wx - drag.lastX;
    const dy = wy - drag.lastY;
    if (dx !== 0 || dy !== 0) {
      doc.dragBy(drag.nodeId, dx, dy);
      drag.lastX = wx;
      drag.lastY = wy;
      drag.moved = true;
    }
  });
  owner.addEventListener("mouseup", () => {
    if (drag !== null && drag.moved) {
      doc.announce(`moved node ${drag.nodeId}`);
    }
    drag = null;
  });
}
