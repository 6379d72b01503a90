/**
 * Compound graph model: graphs nested inside nodes, to arbitrary depth.
 *
 * A model owns one root graph.  Any node may hold a child graph, which
 * makes it a compound; compound geometry is always derived, never set
 * directly: the bounds tightly wrap the children plus the owning graph's
 * margins, with a horizontal label strip appended at the bottom edge.
 * Every mutating operation re-establishes that invariant for all affected
 * ancestors, so a model is valid after each call, not only at commit
 * points.
 *
 * Object ids are monotonically increasing integers unique across nodes,
 * edges, and graphs of one model.  The editor keeps this mirror of the
 * service's document model so edits are instant; the service remains the
 * authority on layout and on canonical serialization.
 */

import { Rect, copyRect, moveRect, rect, rectUnion } from "./geometry.js";

export const DEFAULT_MARGIN = 10.0;
export const DEFAULT_LABEL_STRIP = 12.0;
export const DEFAULT_NODE_W = 40.0;
export const DEFAULT_NODE_H = 40.0;
export const EMPTY_COMPOUND_SIDE = 40.0;

/** An editing operation violated one of its preconditions. */
export class ModelError extends Error {}

export type NodeShape = "rectangle" | "ellipse" | "triangle";
export type LineStyle = "solid" | "dashed";
export type ArrowStyle = "none" | "source" | "target" | "both";

export const NODE_SHAPES: readonly NodeShape[] = ["rectangle", "ellipse", "triangle"];
export const LINE_STYLES: readonly LineStyle[] = ["solid", "dashed"];
export const ARROW_STYLES: readonly ArrowStyle[] = ["none", "source", "target", "both"];

/**
 * Visual attributes shared by nodes and edges.
 *
 * Nodes use fillColor for the interior and borderColor for the outline;
 * edges use borderColor as the line color and ignore fillColor.
 */
export interface RenderStyle {
  fillColor: string;
  borderColor: string;
  lineStyle: LineStyle;
  arrow: ArrowStyle;
  width: number;
}

export function defaultNodeStyle(): RenderStyle {
  return { fillColor: "#ffffff", borderColor: "#000000", lineStyle: "solid", arrow: "none", width: 1.0 };
}

export function defaultEdgeStyle(): RenderStyle {
  return { ...defaultNodeStyle(), arrow: "target" };
}

export function copyStyle(style: RenderStyle): RenderStyle {
  return { ...style };
}

export type Attrs = Record<string, string>;

export interface GNode {
  id: number;
  label: string;
  bounds: Rect;
  shape: NodeShape;
  style: RenderStyle;
  ownerGraph: number;
  childGraph: number | null;
  attrs: Attrs;
}

export interface GEdge {
  id: number;
  source: number;
  target: number;
  label: string;
  style: RenderStyle;
  attrs: Attrs;
}

export interface GGraph {
  id: number;
  nodes: number[];
  parentNode: number | null;
  margins: number;
  labelStrip: number;
  attrs: Attrs;
}

export function makeGraph(id: number, parentNode: number | null = null): GGraph {
  return {
    id,
    nodes: [],
    parentNode,
    margins: DEFAULT_MARGIN,
    labelStrip: DEFAULT_LABEL_STRIP,
    attrs: {},
  };
}

/**
 * One broken model rule, naming the offending object.
 *
 * The field names match the JSON the service's /validate endpoint returns,
 * so local and remote violations flow through the same display code.
 */
export interface Violation {
  object: number;
  rule: string;
  message: string;
}

function violation(object: number, rule: string, message: string): Violation {
  return { object, rule, message };
}

/** A compound graph document plus its editing operations. */
export class GraphModel {
  graphs = new Map<number, GGraph>();
  nodes = new Map<number, GNode>();
  edges = new Map<number, GEdge>();
  highlight = new Set<number>();
  nextId = 0;
  root: number;

  constructor() {
    this.root = this.alloc();
    this.graphs.set(this.root, makeGraph(this.root));
  }

  // ------------------------------------------------------------------
  // id allocation and lookups

  alloc(): number {
    const value = this.nextId;
    this.nextId += 1;
    return value;
  }

  node(nodeId: number): GNode {
    const node = this.nodes.get(nodeId);
    if (node === undefined) {
      throw new ModelError(`unknown node id ${nodeId}`);
    }
    return node;
  }

  graph(graphId: number): GGraph {
    const graph = this.graphs.get(graphId);
    if (graph === undefined) {
      throw new ModelError(`unknown graph id ${graphId}`);
    }
    return graph;
  }

  edge(edgeId: number): GEdge {
    const edge = this.edges.get(edgeId);
    if (edge === undefined) {
      throw new ModelError(`unknown edge id ${edgeId}`);
    }
    return edge;
  }

  rootGraph(): GGraph {
    return this.graphs.get(this.root)!;
  }

  /** Ids of every node nested anywhere below a compound, excluding itself. */
  descendantNodes(nodeId: number): number[] {
    const out: number[] = [];
    const node = this.node(nodeId);
    if (node.childGraph === null) {
      return out;
    }
    const stack = [node.childGraph];
    while (stack.length > 0) {
      const graph = this.graphs.get(stack.pop()!)!;
      for (const childId of graph.nodes) {
        out.push(childId);
        const child = this.nodes.get(childId)!;
        if (child.childGraph !== null) {
          stack.push(child.childGraph);
        }
      }
    }
    return out;
  }

  /** Nesting depth of a graph; the root graph has depth 0. */
  graphDepth(graphId: number): number {
    let depth = 0;
    let graph = this.graph(graphId);
    while (graph.parentNode !== null) {
      graph = this.graphs.get(this.nodes.get(graph.parentNode)!.ownerGraph)!;
      depth += 1;
    }
    return depth;
  }

  // ------------------------------------------------------------------
  // editing operations

  /**
   * Add a leaf node to a graph and return its id.
   *
   * Compound ancestors of the target graph are re-tightened so their
   * derived bounds keep wrapping the new content.
   */
  addNode(
    graphId: number | null = null,
    opts: { label?: string; bounds?: Rect; shape?: NodeShape; style?: RenderStyle } = {},
  ): number {
    const graph = this.graph(graphId === null ? this.root : graphId);
    const bounds = opts.bounds ?? rect(0, 0, DEFAULT_NODE_W, DEFAULT_NODE_H);
    checkRect(bounds);
    const node: GNode = {
      id: this.alloc(),
      label: opts.label ?? "",
      bounds: copyRect(bounds),
      shape: opts.shape ?? "rectangle",
      style: opts.style ? copyStyle(opts.style) : defaultNodeStyle(),
      ownerGraph: graph.id,
      childGraph: null,
      attrs: {},
    };
    this.nodes.set(node.id, node);
    graph.nodes.push(node.id);
    this.retightenFrom(graph.id);
    return node.id;
  }

  /** Connect two existing nodes; self-loops and parallel edges are legal. */
  addEdge(source: number, target: number, opts: { label?: string; style?: RenderStyle } = {}): number {
    this.node(source);
    this.node(target);
    const edge: GEdge = {
      id: this.alloc(),
      source,
      target,
      label: opts.label ?? "",
      style: opts.style ? copyStyle(opts.style) : defaultEdgeStyle(),
      attrs: {},
    };
    this.edges.set(edge.id, edge);
    return edge.id;
  }

  /**
   * Group nodes of one graph under a new compound node; returns its id.
   *
   * The members move into a fresh child graph, preserving their relative
   * order and their absolute geometry.  The compound's bounds are derived
   * from the members immediately.
   */
  makeCompound(graphId: number, members: number[], label = ""): number {
    const graph = this.graph(graphId);
    if (members.length === 0) {
      throw new ModelError("makeCompound needs at least one member");
    }
    const memberSet = new Set(members);
    if (memberSet.size !== members.length) {
      throw new ModelError("duplicate members in makeCompound");
    }
    for (const nodeId of members) {
      const node = this.node(nodeId);
      if (node.ownerGraph !== graph.id) {
        throw new ModelError(`node ${nodeId} belongs to graph ${node.ownerGraph}, not ${graph.id}`);
      }
    }
    const compoundId = this.alloc();
    const childId = this.alloc();
    const child = makeGraph(childId, compoundId);
    const compound: GNode = {
      id: compoundId,
      label,
      bounds: rect(),
      shape: "rectangle",
      style: defaultNodeStyle(),
      ownerGraph: graph.id,
      childGraph: childId,
      attrs: {},
    };
    this.graphs.set(childId, child);
    this.nodes.set(compoundId, compound);
    // Keep the members' relative order when moving them down a level.
    child.nodes = graph.nodes.filter((n) => memberSet.has(n));
    graph.nodes = graph.nodes.filter((n) => !memberSet.has(n));
    graph.nodes.push(compoundId);
    for (const nodeId of child.nodes) {
      this.nodes.get(nodeId)!.ownerGraph = childId;
    }
    compound.bounds = this.compoundBounds(compoundId);
    this.retightenFrom(graph.id);
    return compoundId;
  }

  /**
   * Derived bounds of a compound: child union, margins, label strip.
   *
   * An empty compound keeps a fixed minimum box anchored at its current
   * position, with the label strip still appended.
   */
  compoundBounds(nodeId: number): Rect {
    const node = this.node(nodeId);
    if (node.childGraph === null) {
      throw new ModelError(`node ${nodeId} is not a compound`);
    }
    const graph = this.graphs.get(node.childGraph)!;
    if (graph.nodes.length === 0) {
      return rect(node.bounds.x, node.bounds.y, EMPTY_COMPOUND_SIDE, EMPTY_COMPOUND_SIDE + graph.labelStrip);
    }
    const union = rectUnion(graph.nodes.map((n) => this.nodes.get(n)!.bounds));
    const m = graph.margins;
    return rect(union.x - m, union.y - m, union.w + 2 * m, union.h + 2 * m + graph.labelStrip);
  }

  /** Shift a node, and with a compound its whole subtree, rigidly. */
  translate(nodeId: number, dx: number, dy: number): void {
    if (!Number.isFinite(dx) || !Number.isFinite(dy)) {
      throw new ModelError("translate delta must be finite");
    }
    const node = this.node(nodeId);
    moveRect(node.bounds, dx, dy);
    const moved = this.descendantNodes(nodeId);
    for (const childId of moved) {
      moveRect(this.nodes.get(childId)!.bounds, dx, dy);
    }
    // Re-derive compound bounds inside the moved subtree: shifting a
    // stored rect can drift from the child-derived one in the last ulp.
    const compounds = [nodeId, ...moved].filter((n) => this.nodes.get(n)!.childGraph !== null);
    compounds.sort(
      (a, b) =>
        this.graphDepth(this.nodes.get(b)!.childGraph!) - this.graphDepth(this.nodes.get(a)!.childGraph!),
    );
    for (const compId of compounds) {
      this.nodes.get(compId)!.bounds = this.compoundBounds(compId);
    }
    this.retightenFrom(node.ownerGraph);
  }

  /** Set a leaf node's size; compound sizes are derived and refuse this. */
  resize(nodeId: number, w: number, h: number): void {
    const node = this.node(nodeId);
    if (node.childGraph !== null) {
      throw new ModelError(`compound ${nodeId} bounds are derived from children`);
    }
    if (!Number.isFinite(w) || !Number.isFinite(h) || w < 0 || h < 0) {
      throw new ModelError("size must be finite and non-negative");
    }
    node.bounds.w = w;
    node.bounds.h = h;
    this.retightenFrom(node.ownerGraph);
  }

  /** Change a graph's frame reserve; enclosing compounds re-tighten. */
  setMargins(graphId: number, opts: { margins?: number; labelStrip?: number }): void {
    const graph = this.graph(graphId);
    for (const value of [opts.margins, opts.labelStrip]) {
      if (value !== undefined && (!Number.isFinite(value) || value < 0)) {
        throw new ModelError("margins and labelStrip must be finite and non-negative");
      }
    }
    if (opts.margins !== undefined) {
      graph.margins = opts.margins;
    }
    if (opts.labelStrip !== undefined) {
      graph.labelStrip = opts.labelStrip;
    }
    if (graph.parentNode !== null) {
      const parent = this.nodes.get(graph.parentNode)!;
      parent.bounds = this.compoundBounds(parent.id);
      this.retightenFrom(parent.ownerGraph);
    }
  }

  /** Delete a node (with its subtree and incident edges) or an edge. */
  remove(objectId: number): void {
    if (this.edges.has(objectId)) {
      this.edges.delete(objectId);
      this.highlight.delete(objectId);
      return;
    }
    const node = this.nodes.get(objectId);
    if (node === undefined) {
      if (this.graphs.has(objectId)) {
        throw new ModelError(`graph ${objectId} is removed with its compound node`);
      }
      throw new ModelError(`unknown object id ${objectId}`);
    }
    const doomed = new Set([objectId, ...this.descendantNodes(objectId)]);
    for (const edge of [...this.edges.values()]) {
      if (doomed.has(edge.source) || doomed.has(edge.target)) {
        this.edges.delete(edge.id);
      }
    }
    const owner = node.ownerGraph;
    for (const nodeId of doomed) {
      const gone = this.nodes.get(nodeId)!;
      this.nodes.delete(nodeId);
      if (gone.childGraph !== null) {
        this.graphs.delete(gone.childGraph);
      }
      this.highlight.delete(nodeId);
    }
    for (const graph of this.graphs.values()) {
      graph.nodes = graph.nodes.filter((n) => !doomed.has(n));
    }
    this.retightenFrom(owner);
  }

  // ------------------------------------------------------------------
  // derived-geometry maintenance

  private retightenFrom(graphId: number): void {
    let graph = this.graphs.get(graphId);
    while (graph !== undefined && graph.parentNode !== null) {
      const parent = this.nodes.get(graph.parentNode)!;
      parent.bounds = this.compoundBounds(parent.id);
      graph = this.graphs.get(parent.ownerGraph);
    }
  }

  /** Recompute every compound's bounds bottom-up. */
  retightenAll(): void {
    const byDepth = [...this.graphs.keys()].sort((a, b) => this.graphDepth(b) - this.graphDepth(a));
    for (const graphId of byDepth) {
      const parent = this.graphs.get(graphId)!.parentNode;
      if (parent !== null) {
        this.nodes.get(parent)!.bounds = this.compoundBounds(parent);
      }
    }
  }

  // ------------------------------------------------------------------
  // validation

  /** Check every structural and geometric invariant; empty list means valid. */
  validate(): Violation[] {
    const out: Violation[] = [];
    const seenIn = new Map<number, number[]>();
    if (!this.graphs.has(this.root)) {
      out.push(violation(this.root, "root", "root graph id is not a graph"));
      return out;
    }
    if (this.graphs.get(this.root)!.parentNode !== null) {
      out.push(violation(this.root, "root", "root graph must not have a parent"));
    }

    for (const graph of this.graphs.values()) {
      for (const nodeId of graph.nodes) {
        if (!this.nodes.has(nodeId)) {
          out.push(violation(graph.id, "membership", `graph lists unknown node ${nodeId}`));
          continue;
        }
        const owners = seenIn.get(nodeId);
        if (owners === undefined) {
          seenIn.set(nodeId, [graph.id]);
        } else {
          owners.push(graph.id);
        }
      }
      if (graph.parentNode !== null) {
        const parent = this.nodes.get(graph.parentNode);
        if (parent === undefined) {
          out.push(violation(graph.id, "nesting", `parent node ${graph.parentNode} missing`));
        } else if (parent.childGraph !== graph.id) {
          out.push(violation(graph.id, "nesting", `parent node ${graph.parentNode} does not point back`));
        }
      }
    }

    for (const node of this.nodes.values()) {
      const owners = seenIn.get(node.id) ?? [];
      if (owners.length === 0) {
        out.push(violation(node.id, "membership", "node listed in no graph"));
      } else if (owners.length > 1) {
        const sorted = [...owners].sort((a, b) => a - b);
        out.push(violation(node.id, "membership", `node listed in graphs ${sorted.join(", ")}`));
      } else if (node.ownerGraph !== owners[0]) {
        out.push(
          violation(node.id, "membership", `ownerGraph ${node.ownerGraph} != listing graph ${owners[0]}`),
        );
      }
      if (!this.graphs.has(node.ownerGraph)) {
        out.push(violation(node.id, "membership", `owner graph ${node.ownerGraph} missing`));
      }
      if (node.childGraph !== null) {
        const child = this.graphs.get(node.childGraph);
        if (child === undefined) {
          out.push(violation(node.id, "nesting", `child graph ${node.childGraph} missing`));
        } else if (child.parentNode !== node.id) {
          out.push(violation(node.id, "nesting", "child graph does not point back"));
        }
      }
      const b = node.bounds;
      if (![b.x, b.y, b.w, b.h].every(Number.isFinite)) {
        out.push(violation(node.id, "geometry", "bounds must be finite"));
      } else if (b.w < 0 || b.h < 0) {
        out.push(violation(node.id, "geometry", "bounds size must be non-negative"));
      }
      if (node.style.width <= 0) {
        out.push(violation(node.id, "style", "stroke width must be positive"));
      }
    }

    // The nesting relation must be a tree rooted at the root graph.
    const reachable = new Set<number>();
    const stack = [this.root];
    while (stack.length > 0) {
      const graphId = stack.pop()!;
      if (reachable.has(graphId) || !this.graphs.has(graphId)) {
        continue;
      }
      reachable.add(graphId);
      for (const nodeId of this.graphs.get(graphId)!.nodes) {
        const node = this.nodes.get(nodeId);
        if (node !== undefined && node.childGraph !== null) {
          stack.push(node.childGraph);
        }
      }
    }
    for (const graphId of this.graphs.keys()) {
      if (!reachable.has(graphId)) {
        out.push(violation(graphId, "nesting", "graph not reachable from the root (orphan or cycle)"));
      }
    }

    for (const edge of this.edges.values()) {
      for (const endpoint of [edge.source, edge.target]) {
        if (!this.nodes.has(endpoint)) {
          out.push(violation(edge.id, "edge", `endpoint ${endpoint} missing`));
        }
      }
      if (edge.style.width <= 0) {
        out.push(violation(edge.id, "style", "stroke width must be positive"));
      }
    }

    for (const node of this.nodes.values()) {
      if (node.childGraph !== null && this.graphs.has(node.childGraph)) {
        const expected = this.compoundBounds(node.id);
        const b = node.bounds;
        if (b.x !== expected.x || b.y !== expected.y || b.w !== expected.w || b.h !== expected.h) {
          out.push(
            violation(node.id, "tight-bound", "compound bounds do not wrap children + margins + strip"),
          );
        }
      }
    }

    for (const objectId of this.highlight) {
      if (!this.nodes.has(objectId) && !this.edges.has(objectId)) {
        out.push(violation(objectId, "highlight", "highlight references unknown object"));
      }
    }
    return out;
  }
}

function checkRect(r: Rect): void {
  if (![r.x, r.y, r.w, r.h].every(Number.isFinite)) {
    throw new ModelError("bounds must be finite");
  }
  if (r.w < 0 || r.h < 0) {
    throw new ModelError("bounds size must be non-negative");
  }
}

function attrsEqual(a: Attrs, b: Attrs): boolean {
  const aKeys = Object.keys(a);
  if (aKeys.length !== Object.keys(b).length) {
    return false;
  }
  return aKeys.every((k) => Object.prototype.hasOwnProperty.call(b, k) && a[k] === b[k]);
}

function rectsClose(a: Rect, b: Rect, tol: number): boolean {
  return (
    Math.abs(a.x - b.x) <= tol &&
    Math.abs(a.y - b.y) <= tol &&
    Math.abs(a.w - b.w) <= tol &&
    Math.abs(a.h - b.h) <= tol
  );
}

function stylesEqual(a: RenderStyle, b: RenderStyle, tol: number): boolean {
  return (
    a.fillColor === b.fillColor &&
    a.borderColor === b.borderColor &&
    a.lineStyle === b.lineStyle &&
    a.arrow === b.arrow &&
    Math.abs(a.width - b.width) <= tol
  );
}

function sameKeys<T>(a: Map<number, T>, b: Map<number, T>): boolean {
  if (a.size !== b.size) {
    return false;
  }
  for (const key of a.keys()) {
    if (!b.has(key)) {
      return false;
    }
  }
  return true;
}

/** Structural equality: same ids, nesting, order, styles, geometry within tol. */
export function modelsEqual(a: GraphModel, b: GraphModel, tol = 1e-9): boolean {
  if (a.root !== b.root) {
    return false;
  }
  if (!sameKeys(a.graphs, b.graphs) || !sameKeys(a.nodes, b.nodes) || !sameKeys(a.edges, b.edges)) {
    return false;
  }
  for (const [gid, ga] of a.graphs) {
    const gb = b.graphs.get(gid)!;
    if (ga.nodes.length !== gb.nodes.length || !ga.nodes.every((n, i) => n === gb.nodes[i])) {
      return false;
    }
    if (ga.parentNode !== gb.parentNode) {
      return false;
    }
    if (Math.abs(ga.margins - gb.margins) > tol || Math.abs(ga.labelStrip - gb.labelStrip) > tol) {
      return false;
    }
    if (!attrsEqual(ga.attrs, gb.attrs)) {
      return false;
    }
  }
  for (const [nid, na] of a.nodes) {
    const nb = b.nodes.get(nid)!;
    if (
      na.label !== nb.label ||
      na.shape !== nb.shape ||
      na.ownerGraph !== nb.ownerGraph ||
      na.childGraph !== nb.childGraph ||
      !attrsEqual(na.attrs, nb.attrs)
    ) {
      return false;
    }
    if (!rectsClose(na.bounds, nb.bounds, tol) || !stylesEqual(na.style, nb.style, tol)) {
      return false;
    }
  }
  for (const [eid, ea] of a.edges) {
    const eb = b.edges.get(eid)!;
    if (ea.source !== eb.source || ea.target !== eb.target || ea.label !== eb.label || !attrsEqual(ea.attrs, eb.attrs)) {
      return false;
    }
    if (!stylesEqual(ea.style, eb.style, tol)) {
      return false;
    }
  }
  return true;
}
