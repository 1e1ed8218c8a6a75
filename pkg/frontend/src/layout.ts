/** Uniform circle packing for the bubble panel: hex-offset rows, equal
 * radii, no overlaps. The classification carries no weight information, so
 * all bubbles are the same size. */

export interface Circle {
  x: number;
  y: number;
  r: number;
}

export function packCircles(count: number, width: number, radius: number, gap = 6): Circle[] {
  const circles: Circle[] = [];
  const step = radius * 2 + gap;
  const perRow = Math.max(1, Math.floor((width - radius) / step));
  const rowHeight = step * 0.875; // hex-ish vertical compression, still gap-safe
  for (let index = 0; index < count; index += 1) {
    const row = Math.floor(index / perRow);
    const column = index % perRow;
    const offset = row % 2 === 1 ? step / 2 : 0;
    circles.push({
      x: radius + column * step + offset,
      y: radius + row * rowHeight,
      r: radius,
    });
  }
  return circles;
}
