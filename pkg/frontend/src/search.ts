/** Label ordering for the small-multiples list. Search reproduces the
 * engine's ordering rule exactly: case-insensitive substring matches first,
 * then the rest, both halves keeping their incoming order. */

export function searchOrder(labels: string[], query: string): string[] {
  if (!query) return [...labels];
  const needle = query.toLowerCase();
  const hits = labels.filter((label) => label.toLowerCase().includes(needle));
  const misses = labels.filter((label) => !label.toLowerCase().includes(needle));
  return [...hits, ...misses];
}
