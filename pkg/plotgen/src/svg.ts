/* Minimal deterministic SVG assembly: attribute order is insertion order,
   coordinates are fixed to two decimals, no timestamps or ids. */

export function esc(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function fmt(v: number): string {
  const s = v.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
}

export function el(
  tag: string,
  attrs: Record<string, string>,
  children?: string[] | string,
): string {
  const a = Object.entries(attrs)
    .map(([k, v]) => ` ${k}="${esc(v)}"`)
    .join("");
  if (children === undefined) return `<${tag}${a}/>`;
  const body = typeof children === "string" ? children : children.join("");
  return `<${tag}${a}>${body}</${tag}>`;
}

export function text(attrs: Record<string, string>, content: string): string {
  return el("text", attrs, esc(content));
}
