// Rendering helpers. Amounts are integer minor units; the console shows
// them with a thousands separator and the auction currency code exactly
// as received. Percentages render with one decimal.

export function formatAmount(amount: number, currency?: string): string {
  const grouped = amount.toLocaleString('en-US');
  return currency ? `${grouped} ${currency}` : grouped;
}

export function formatPercent(value: number | null | undefined): string {
  if (value === null || value === undefined) return 'pending';
  return `${value.toFixed(1)}%`;
}

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}
