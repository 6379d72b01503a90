/**
 * Plane geometry primitives shared by the model and the canvas renderer.
 *
 * Rectangles are plain records anchored at their top-left corner, with x
 * growing rightward and y growing downward, matching screen conventions.
 */

export interface Rect {
  x: number;
  y: number;
  w: number;
  h: number;
}

export function rect(x = 0, y = 0, w = 0, h = 0): Rect {
  return { x, y, w, h };
}

export function copyRect(r: Rect): Rect {
  return { x: r.x, y: r.y, w: r.w, h: r.h };
}

/** Shift a rectangle in place. */
export function moveRect(r: Rect, dx: number, dy: number): void {
  r.x += dx;
  r.y += dy;
}

export function rectRight(r: Rect): number {
  return r.x + r.w;
}

export function rectBottom(r: Rect): number {
  return r.y + r.h;
}

export function rectCenter(r: Rect): [number, number] {
  return [r.x + r.w / 2, r.y + r.h / 2];
}

/** Smallest rectangle covering every rectangle in a non-empty list. */
export function rectUnion(rects: Rect[]): Rect {
  if (rects.length === 0) {
    throw new Error("rectUnion of no rectangles");
  }
  let x0 = Infinity;
  let y0 = Infinity;
  let x1 = -Infinity;
  let y1 = -Infinity;
  for (const r of rects) {
    x0 = Math.min(x0, r.x);
    y0 = Math.min(y0, r.y);
    x1 = Math.max(x1, rectRight(r));
    y1 = Math.max(y1, rectBottom(r));
  }
  return { x: x0, y: y0, w: x1 - x0, h: y1 - y0 };
}

export function rectsEqual(a: Rect, b: Rect): boolean {
  return a.x === b.x && a.y === b.y && a.w === b.w && a.h === b.h;
}
