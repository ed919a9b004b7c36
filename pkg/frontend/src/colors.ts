/** Deterministic slot -> color mapping, shared by both views. */

export function slotColor(slot: string): string {
  let hash = 0;
  for (let i = 0; i < slot.length; i++) {
    hash = (hash * 31 + slot.charCodeAt(i)) >>> 0;
  }
  const hue = hash % 360;
  return `hsl(${hue}, 70%, 78%)`;
}
