/* Log-axis arithmetic and the L filename token. */

/* Same token rule as the harness: integral values lose the decimal point,
   no value collapses to "na". */
export function formatL(raw: string | undefined): string {
  if (raw === undefined || raw === "na") return "na";
  const v = Number(raw);
  if (!Number.isFinite(v) || v <= 0) {
    throw new Error(`invalid L value "${raw}"`);
  }
  return String(v);
}

export class LogScale {
  readonly lo: number;
  readonly hi: number;
  readonly rangeLo: number;
  readonly rangeHi: number;

  constructor(lo: number, hi: number, rangeLo: number, rangeHi: number) {
    if (!(lo > 0) || !(hi > 0)) throw new Error("log scale domain must be positive");
    if (hi < lo) throw new Error("log scale domain is inverted");
    this.lo = lo;
    this.hi = hi;
    this.rangeLo = rangeLo;
    this.rangeHi = rangeHi;
  }

  map(v: number): number {
    const c = Math.min(Math.max(v, this.lo), this.hi);
    if (this.hi === this.lo) return (this.rangeLo + this.rangeHi) / 2;
    const t = (Math.log10(c) - Math.log10(this.lo)) / (Math.log10(this.hi) - Math.log10(this.lo));
    return this.rangeLo + t * (this.rangeHi - this.rangeLo);
  }
}

/* Integer powers of ten whose values cover [lo, hi]; returned as exponents. */
export function powerTicks(lo: number, hi: number): number[] {
  const a = Math.ceil(Math.log10(lo) - 1e-9) + 0;
  const b = Math.floor(Math.log10(hi) + 1e-9) + 0;
  const out: number[] = [];
  for (let p = a; p <= b; p++) out.push(p);
  return out;
}

export function tickLabel(exponent: number): string {
  return `1e${exponent}`;
}

export function floorPow10(v: number): number {
  return Math.pow(10, Math.floor(Math.log10(v) + 1e-9));
}

export function ceilPow10(v: number): number {
  return Math.pow(10, Math.ceil(Math.log10(v) - 1e-9));
}
