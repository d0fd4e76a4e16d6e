/** Minimal exact rationals for wire-format line parameters. */

export interface Rat {
  n: number;
  d: number;
}

function gcd(a: number, b: number): number {
  a = Math.abs(a);
  b = Math.abs(b);
  while (b) [a, b] = [b, a % b];
  return a || 1;
}

export function rat(n: number, d = 1): Rat {
  if (d === 0) throw new Error("zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const g = gcd(n, d);
  return { n: n / g, d: d / g };
}

/** Snap a float onto the 1/1000 grid; exactness lives server-side. */
export function fromNumber(v: number): Rat {
  return rat(Math.round(v * 1000), 1000);
}

export function toNumber(r: Rat): number {
  return r.n / r.d;
}

/** Matches the server's Fraction string form: "p" or "p/q". */
export function ratToString(r: Rat): string {
  return r.d === 1 ? `${r.n}` : `${r.n}/${r.d}`;
}

export function parseRat(s: string): Rat {
  const parts = s.split("/");
  if (parts.length === 1) return rat(Number(parts[0]), 1);
  return rat(Number(parts[0]), Number(parts[1]));
}

export function ratSub(a: Rat, b: Rat): Rat {
  return rat(a.n * b.d - b.n * a.d, a.d * b.d);
}

export function ratDiv(a: Rat, b: Rat): Rat {
  if (b.n === 0) throw new Error("division by zero");
  return rat(a.n * b.d, a.d * b.n);
}
