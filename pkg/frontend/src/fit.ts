/**
 * Power-law fit y = a * x^b by ordinary least squares in log-log space.
 */

export interface PowerLawFit {
  prefactor: number;
  exponent: number;
  /** number of points used (positive-valued pairs only) */
  n: number;
}

export function fitPowerLaw(x: number[], y: number[]): PowerLawFit {
  if (x.length !== y.length) {
    throw new Error("x and y lengths differ");
  }
  const lx: number[] = [];
  const ly: number[] = [];
  for (let i = 0; i < x.length; i++) {
    if (x[i] > 0 && y[i] > 0 && Number.isFinite(x[i]) && Number.isFinite(y[i])) {
      lx.push(Math.log(x[i]));
      ly.push(Math.log(y[i]));
    }
  }
  if (lx.length < 3) {
    throw new Error(`power-law fit needs at least 3 positive points, got ${lx.length}`);
  }
  const n = lx.length;
  const mx = lx.reduce((s, v) => s + v, 0) / n;
  const my = ly.reduce((s, v) => s + v, 0) / n;
  let sxx = 0;
  let sxy = 0;
  for (let i = 0; i < n; i++) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  const exponent = sxy / sxx;
  const prefactor = Math.exp(my - exponent * mx);
  return { prefactor, exponent, n };
}
