//! Numerical ground truth: certified univariate root finding via
//! simultaneous iteration, amoeba point sets, fiber-sampled amoeba clouds,
//! and empirical directed Hausdorff distances.

use num::complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::LaurentPoly;
use crate::tropical::{TropicalCurve, UnivariateArchTrop};

const LN2: f64 = std::f64::consts::LN_2;

/// Scaled complex value `(re + i*im) * 2^e`; survives products whose
/// magnitude overflows f64.
#[derive(Debug, Clone, Copy)]
struct Sc {
    re: f64,
    im: f64,
    e: i64,
}

impl Sc {
    fn zero() -> Sc {
        Sc {
            re: 0.0,
            im: 0.0,
            e: 0,
        }
    }

    fn from_c(c: Complex64) -> Sc {
        Sc {
            re: c.re,
            im: c.im,
            e: 0,
        }
        .normalized()
    }

    fn normalized(self) -> Sc {
        let a = self.re.abs().max(self.im.abs());
        if a == 0.0 || !a.is_finite() {
            return Sc {
                re: self.re,
                im: self.im,
                e: 0,
            };
        }
        let k = a.log2().floor() as i32;
        let s = 2f64.powi(-k);
        Sc {
            re: self.re * s,
            im: self.im * s,
            e: self.e + k as i64,
        }
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn mul(self, o: Sc) -> Sc {
        Sc {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
            e: self.e + o.e,
        }
        .normalized()
    }

    fn add(self, o: Sc) -> Sc {
        // zero carries e = 0, which must not win the exponent comparison
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let (hi, lo) = if self.e >= o.e { (self, o) } else { (o, self) };
        let d = hi.e - lo.e;
        if d > 200 {
            return hi;
        }
        let s = 2f64.powi(-(d as i32));
        Sc {
            re: hi.re + lo.re * s,
            im: hi.im + lo.im * s,
            e: hi.e,
        }
        .normalized()
    }

    /// `ln` of the magnitude; `-inf` for zero
    fn ln_abs(&self) -> f64 {
        self.re.hypot(self.im).ln() + self.e as f64 * LN2
    }

    /// ratio as an ordinary complex number (may over/underflow to inf/0)
    fn ratio(self, o: Sc) -> Complex64 {
        let m = Complex64::new(self.re, self.im) / Complex64::new(o.re, o.im);
        let d = (self.e - o.e).clamp(-2000, 2000) as i32;
        if d >= 0 {
            m * 2f64.powi(d.min(1023)) * 2f64.powi((d - d.min(1023)).max(0))
        } else {
            let d = -d;
            m / (2f64.powi(d.min(1023)) * 2f64.powi((d - d.min(1023)).max(0)))
        }
    }
}

/// Horner evaluation of `p` and `p'` at `x`, coefficients low to high.
fn eval_scaled(coeffs: &[Complex64], x: Complex64) -> (Sc, Sc) {
    let xs = Sc::from_c(x);
    let mut v = Sc::zero();
    let mut d = Sc::zero();
    for c in coeffs.iter().rev() {
        d = d.mul(xs).add(v);
        v = v.mul(xs).add(Sc::from_c(*c));
    }
    (v, d)
}

/// Horner value plus a running bound on its rounding error (magnitude, in
/// the same scaled representation); the true value lies within the bound.
fn eval_with_error(coeffs: &[Complex64], x: Complex64) -> (Sc, Sc) {
    let xs = Sc::from_c(x);
    let xa = Sc {
        re: xs.re.hypot(xs.im),
        im: 0.0,
        e: xs.e,
    };
    let eps = Sc::from_c(Complex64::new(2.0 * f64::EPSILON, 0.0));
    let mut v = Sc::zero();
    let mut err = Sc::zero();
    for c in coeffs.iter().rev() {
        let va = Sc {
            re: v.re.hypot(v.im),
            im: 0.0,
            e: v.e,
        };
        let ca = Sc::from_c(Complex64::new(c.norm(), 0.0));
        // err' = err*|x| + eps*(|v|*|x| + |c|)
        err = err.mul(xa).add(eps.mul(va.mul(xa).add(ca)));
        v = v.mul(xs).add(Sc::from_c(*c));
    }
    (v, err)
}

#[doc(hidden)]
pub fn debug_eval(coeffs: &[Complex64], x: Complex64) -> ((f64, f64, i64), (f64, f64, i64)) {
    let (p, d) = eval_scaled(coeffs, x);
    ((p.re, p.im, p.e), (d.re, d.im, d.e))
}

#[derive(Debug, Clone)]
pub struct CertifiedRoot {
    pub value: Complex64,
    /// inclusion radius: the disc around `value` contains `multiplicity`
    /// roots (Weierstrass discs of the merged cluster)
    pub error: f64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone)]
pub struct RootSet {
    pub roots: Vec<CertifiedRoot>,
    /// total multiplicity = number of nonzero roots
    pub degree_accounted: i64,
}

/// Warm-start radii from the convex hull of `(k, ln|c_k|)`: one circle per
/// hull edge, with as many points as its horizontal length.
fn warm_start(coeffs: &[Complex64]) -> Vec<Complex64> {
    let pts: Vec<(usize, f64)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > 0.0)
        .map(|(k, c)| (k, -c.norm().ln()))
        .collect();
    // lower hull of (k, -ln|c_k|); edge slope sigma gives radius e^sigma
    let mut chain: Vec<(usize, f64)> = Vec::new();
    for &p in &pts {
        while chain.len() >= 2 {
            let a = chain[chain.len() - 2];
            let b = chain[chain.len() - 1];
            let cross = (b.0 - a.0) as f64 * (p.1 - b.1) - (b.1 - a.1) * (p.0 - b.0) as f64;
            if cross > 0.0 {
                break;
            }
            chain.pop();
        }
        chain.push(p);
    }
    let mut z = Vec::with_capacity(coeffs.len() - 1);
    for (g, w) in chain.windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        let m = b.0 - a.0;
        let sigma = (b.1 - a.1) / m as f64;
        let r = sigma.exp();
        for q in 0..m {
            // the 0.37 twist breaks conjugate symmetry, which can otherwise
            // trap the iteration in swap cycles or collisions
            let theta =
                2.0 * std::f64::consts::PI * (q as f64 + 0.5) / m as f64 + 0.7 * g as f64 + 0.37;
            z.push(Complex64::from_polar(r, theta));
        }
    }
    z
}

/// All roots of the dense polynomial `coeffs[0] + coeffs[1] x + ...`
/// (nonzero constant and leading coefficient) by Ehrlich–Aberth iteration
/// with Weierstrass inclusion discs and multiplicity clustering.
pub fn solve_dense(coeffs: &[Complex64]) -> Vec<CertifiedRoot> {
    let deg = coeffs.len() - 1;
    if deg == 0 {
        return Vec::new();
    }
    let mut z = warm_start(coeffs);
    debug_assert_eq!(z.len(), deg);
    // every root norm lies in [rmin/2, 2*rmax] (hull-slope root bounds), so
    // strays can be projected back without skipping any root
    let rmin = z.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
    let rmax = z.iter().map(|v| v.norm()).fold(0.0, f64::max);

    for _ in 0..400 {
        // separate collided approximations; duplicates would zero out the
        // repulsion term and freeze the iteration
        for i in 0..deg {
            for j in (i + 1)..deg {
                if (z[i] - z[j]).norm() < 1e-14 * (1.0 + z[i].norm()) {
                    let bump = Complex64::new(1e-7, 2e-7) * (1.0 + z[j].norm()) * (j as f64 + 1.0);
                    z[j] += bump;
                }
            }
        }
        let mut max_rel = 0.0f64;
        for i in 0..deg {
            let (p, dp) = eval_scaled(coeffs, z[i]);
            if p.is_zero() {
                continue;
            }
            let nr = p.ratio(dp);
            if !nr.is_finite() {
                continue;
            }
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..deg {
                if j != i {
                    s += 1.0 / (z[i] - z[j]);
                }
            }
            let den = Complex64::new(1.0, 0.0) - nr * s;
            let mut w = if den.norm() > 1e-300 { nr / den } else { nr };
            if !w.is_finite() {
                continue;
            }
            // cap the step: a near-cancelling denominator can fling the
            // approximation many orders of magnitude away, and the walk
            // back dominates the iteration budget
            let cap = 0.7 * (1.0 + z[i].norm());
            if w.norm() > cap {
                w *= cap / w.norm();
            }
            z[i] -= w;
            // a cluster of strays beyond the outer bound repels itself
            // outward forever; project it back with an angle jitter that
            // breaks the pack apart
            let zn = z[i].norm();
            if zn > 4.0 * rmax || zn < 0.25 * rmin {
                let target = if zn > 4.0 * rmax {
                    2.0 * rmax
                } else {
                    0.5 * rmin
                };
                let theta = z[i].im.atan2(z[i].re) + 0.2 * (i as f64 + 1.0);
                z[i] = Complex64::from_polar(target, theta);
            }
            max_rel = max_rel.max(w.norm() / (1.0 + z[i].norm()));
        }
        if max_rel < 1e-14 {
            break;
        }
    }

    // Weierstrass inclusion radii
    let lead = Sc::from_c(coeffs[deg]);
    let mut radius = vec![0.0f64; deg];
    for i in 0..deg {
        let (p, perr) = eval_with_error(coeffs, z[i]);
        let mut den = lead;
        for j in 0..deg {
            if j != i {
                den = den.mul(Sc::from_c(z[i] - z[j]));
            }
        }
        // numerator inflated by the evaluation's rounding-error bound;
        // combined in log space to dodge overflow
        let (lp, le) = (p.ln_abs(), perr.ln_abs());
        let ln_num = if lp == f64::NEG_INFINITY && le == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            lp.max(le) + (1.0 + (-(lp - le).abs()).exp()).ln()
        };
        let w = if den.is_zero() {
            f64::INFINITY
        } else {
            (ln_num - den.ln_abs()).exp()
        };
        radius[i] = deg as f64 * w;
    }

    // merge overlapping discs into multiplicity clusters
    let mut cluster = vec![usize::MAX; deg];
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for i in 0..deg {
        if cluster[i] != usize::MAX {
            continue;
        }
        let id = clusters.len();
        let mut stack = vec![i];
        cluster[i] = id;
        let mut members = vec![i];
        while let Some(a) = stack.pop() {
            for b in 0..deg {
                // 3x slack: a d-fold root's approximations sit ~2r apart
                // with radii ~r, right at the bare overlap boundary
                if cluster[b] == usize::MAX
                    && (z[a] - z[b]).norm() <= 3.0 * (radius[a] + radius[b])
                {
                    cluster[b] = id;
                    stack.push(b);
                    members.push(b);
                }
            }
        }
        clusters.push(members);
    }

    let mut out = Vec::new();
    for members in clusters {
        let m = members.len();
        let mut center = Complex64::new(0.0, 0.0);
        for &i in &members {
            center += z[i];
        }
        center /= m as f64;
        if m > 1 {
            center = refine_multiple(coeffs, center, m);
        }
        let mut err = 0.0f64;
        for &i in &members {
            err = err.max((z[i] - center).norm() + radius[i]);
        }
        out.push(CertifiedRoot {
            value: center,
            error: err,
            multiplicity: m,
        });
    }
    out.sort_by(|a, b| {
        a.value
            .norm()
            .partial_cmp(&b.value.norm())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    out
}

/// Newton iteration on the (m-1)-th derivative, where an m-fold root of `p`
/// is simple; sharpens the cluster mean to near machine precision.
fn refine_multiple(coeffs: &[Complex64], start: Complex64, m: usize) -> Complex64 {
    let mut d: Vec<Complex64> = coeffs.to_vec();
    for _ in 0..(m - 1) {
        d = d
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * k as f64)
            .collect();
        if d.len() < 2 {
            return start;
        }
    }
    let mut zc = start;
    let scale = 1.0 + start.norm();
    for _ in 0..60 {
        let (p, dp) = eval_scaled(&d, zc);
        if p.is_zero() {
            break;
        }
        let step = p.ratio(dp);
        if !step.is_finite() || step.norm() > 0.5 * scale {
            return start;
        }
        zc -= step;
        if step.norm() < 1e-16 * scale {
            break;
        }
    }
    zc
}

/// Certified nonzero roots of a univariate Laurent polynomial.
pub fn roots_1d(f: &LaurentPoly) -> Result<RootSet> {
    if f.n() != 1 {
        return Err(Error::NotUnivariate);
    }
    if f.term_count() < 2 {
        return Err(Error::SinglePoint);
    }
    let (a1, at) = f.exponent_range(0);
    let deg = (at - a1) as usize;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); deg + 1];
    for t in f.terms() {
        let (re, im) = t.coeff.to_complex_f64();
        coeffs[(t.exponent[0] - a1) as usize] = Complex64::new(re, im);
    }
    let roots = solve_dense(&coeffs);
    Ok(RootSet {
        roots,
        degree_accounted: at - a1,
    })
}

/// Sorted root log-norms `(log-norm, multiplicity, error radius)`.
pub fn amoeba_1d(f: &LaurentPoly) -> Result<Vec<(f64, usize, f64)>> {
    let rs = roots_1d(f)?;
    let mut pts: Vec<(f64, usize, f64)> = rs
        .roots
        .iter()
        .filter(|r| r.value.norm() > 0.0)
        .map(|r| {
            let norm = r.value.norm();
            // log-space radius: |log|z| - log|c|| <= r/(|c|-r) for r < |c|
            let log_err = if r.error < norm {
                r.error / (norm - r.error)
            } else {
                f64::INFINITY
            };
            (norm.ln(), r.multiplicity, log_err)
        })
        .collect();
    pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    Ok(pts)
}

#[derive(Debug, Clone)]
pub struct FiberGrid {
    /// values of `log|x2|` to sample
    pub moduli: Vec<f64>,
    /// number of uniformly spaced phases per modulus
    pub phases: usize,
}

impl FiberGrid {
    /// 16 moduli across `[lo, hi]`, 8 phases.
    pub fn span(lo: f64, hi: f64) -> FiberGrid {
        FiberGrid {
            moduli: (0..16)
                .map(|i| lo + (hi - lo) * i as f64 / 15.0)
                .collect(),
            phases: 8,
        }
    }
}

/// Default grid: the tropical curve's vertical bounding box widened by
/// `2 log(t-1)`.
pub fn default_grid(f: &LaurentPoly, curve: &TropicalCurve) -> FiberGrid {
    let margin = 2.0 * ((f.term_count().max(2) - 1) as f64).ln();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in &curve.vertices {
        let (y, _) = v.y.approx();
        lo = lo.min(y);
        hi = hi.max(y);
    }
    if !lo.is_finite() {
        lo = 0.0;
        hi = 0.0;
    }
    FiberGrid::span(lo - margin - 1.0, hi + margin + 1.0)
}

#[derive(Debug, Clone)]
pub struct AmoebaCloud {
    /// `([log|x1|, log|x2|], error radius)`
    pub points: Vec<([f64; 2], f64)>,
    pub degenerate_fibers: usize,
}

/// Amoeba sample of a bivariate polynomial: fix `x2` on each grid fiber and
/// solve the resulting univariate polynomial in `x1`.
pub fn sample_amoeba_2d(f: &LaurentPoly, grid: &FiberGrid) -> Result<AmoebaCloud> {
    if f.n() != 2 {
        return Err(Error::NotPlanar);
    }
    let (a1min, a1max) = f.exponent_range(0);
    let span = (a1max - a1min) as usize;
    let mut cloud = AmoebaCloud {
        points: Vec::new(),
        degenerate_fibers: 0,
    };
    if span == 0 {
        return Err(Error::BadSystemShape);
    }
    for &u2 in &grid.moduli {
        for k in 0..grid.phases {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / grid.phases as f64;
            let mut coeffs = vec![Complex64::new(0.0, 0.0); span + 1];
            for t in f.terms() {
                let (re, im) = t.coeff.to_complex_f64();
                let a2 = t.exponent[1] as f64;
                let w = Complex64::from_polar((a2 * u2).exp(), a2 * theta);
                coeffs[(t.exponent[0] - a1min) as usize] += Complex64::new(re, im) * w;
            }
            while coeffs.len() > 1 && coeffs.last().unwrap().norm() == 0.0 {
                coeffs.pop();
            }
            let drop = coeffs.iter().take_while(|c| c.norm() == 0.0).count();
            let coeffs = &coeffs[drop.min(coeffs.len() - 1)..];
            if coeffs.len() < 2 || coeffs[0].norm() == 0.0 {
                cloud.degenerate_fibers += 1;
                continue;
            }
            for r in solve_dense(coeffs) {
                let norm = r.value.norm();
                if norm > 0.0 && norm.is_finite() {
                    let log_err = if r.error < norm {
                        r.error / (norm - r.error)
                    } else {
                        f64::INFINITY
                    };
                    for _ in 0..r.multiplicity {
                        cloud.points.push(([norm.ln(), u2], log_err));
                    }
                }
            }
        }
    }
    Ok(cloud)
}

/// Distance target for empirical Hausdorff estimates.
pub enum DistTarget<'a> {
    Slopes(&'a UnivariateArchTrop),
    Curve(&'a TropicalCurve),
    Cloud1(&'a [f64]),
    Cloud2(&'a [[f64; 2]]),
}

/// Source sample: points with error radii.
pub enum SamplePoints {
    One(Vec<(f64, f64)>),
    Two(Vec<([f64; 2], f64)>),
}

fn dist_to_target_1(v: f64, b: &DistTarget) -> Result<(f64, f64)> {
    match b {
        DistTarget::Slopes(t) => t.distance_to(v),
        DistTarget::Cloud1(pts) => {
            if pts.is_empty() {
                return Err(Error::EmptySet);
            }
            let d = pts
                .iter()
                .map(|p| (v - p).abs())
                .fold(f64::INFINITY, f64::min);
            Ok((d, 0.0))
        }
        _ => Err(Error::BadSystemShape),
    }
}

fn dist_to_target_2(v: [f64; 2], b: &DistTarget) -> Result<(f64, f64)> {
    match b {
        DistTarget::Curve(c) => c.distance_to(v),
        DistTarget::Cloud2(pts) => {
            if pts.is_empty() {
                return Err(Error::EmptySet);
            }
            let d = pts
                .iter()
                .map(|p| ((v[0] - p[0]).powi(2) + (v[1] - p[1]).powi(2)).sqrt())
                .fold(f64::INFINITY, f64::min);
            Ok((d, 0.0))
        }
        _ => Err(Error::BadSystemShape),
    }
}

/// `sup_{a in A} inf_{b in B} |a - b|` over the sample, with the combined
/// error bound. A sampled source only bounds the true sup from below.
pub fn directed_hausdorff(a: &SamplePoints, b: &DistTarget) -> Result<(f64, f64)> {
    let mut sup = f64::NEG_INFINITY;
    let mut err = 0.0f64;
    match a {
        SamplePoints::One(pts) => {
            if pts.is_empty() {
                return Err(Error::EmptySet);
            }
            for (v, ea) in pts {
                let (d, eb) = dist_to_target_1(*v, b)?;
                if d > sup {
                    sup = d;
                    err = ea + eb;
                }
            }
        }
        SamplePoints::Two(pts) => {
            if pts.is_empty() {
                return Err(Error::EmptySet);
            }
            for (v, ea) in pts {
                let (d, eb) = dist_to_target_2(*v, b)?;
                if d > sup {
                    sup = d;
                    err = ea + eb;
                }
            }
        }
    }
    Ok((sup, err))
}

/// Phases `(arg x1, arg x2)` making all three terms of a trinomial cancel at
/// the moduli `e^{v}`; exists exactly when `v` is in ArchTrop (the term
/// magnitudes close a triangle).
pub fn trinomial_phases(f: &LaurentPoly, v: [f64; 2]) -> Option<[f64; 2]> {
    if f.n() != 2 || f.term_count() != 3 {
        return None;
    }
    let mut mags = [0.0f64; 3];
    let mut args = [0.0f64; 3];
    let mut exps = [[0i64; 2]; 3];
    for (i, t) in f.terms().iter().enumerate() {
        let (re, im) = t.coeff.to_complex_f64();
        let (lm, _) = t.coeff.log_mag().approx();
        mags[i] = lm + t.exponent[0] as f64 * v[0] + t.exponent[1] as f64 * v[1];
        args[i] = im.atan2(re);
        exps[i] = [t.exponent[0], t.exponent[1]];
    }
    let mmax = mags[0].max(mags[1]).max(mags[2]);
    let m: Vec<f64> = mags.iter().map(|x| (x - mmax).exp()).collect();
    // take the two largest magnitudes as the explicit triangle sides; closing
    // on a negligible side instead would drown its length in cancellation
    let mut ord = [0usize, 1, 2];
    ord.sort_by(|a, b| m[*b].partial_cmp(&m[*a]).unwrap());
    let (ia, ib, ic) = (ord[0], ord[1], ord[2]);
    // T_a + T_b = -T_c with |T_a + T_b| = M_c
    let mut cosd =
        (m[ic] * m[ic] - m[ia] * m[ia] - m[ib] * m[ib]) / (2.0 * m[ia] * m[ib]);
    if cosd.abs() > 1.0 + 1e-9 {
        return None;
    }
    cosd = cosd.clamp(-1.0, 1.0);
    let delta = cosd.acos();
    let ta = Complex64::new(m[ia], 0.0);
    let tb = Complex64::from_polar(m[ib], delta);
    let tc = -(ta + tb);
    let mut psi = [0.0f64; 3];
    psi[ia] = 0.0;
    psi[ib] = delta;
    psi[ic] = tc.im.atan2(tc.re);
    // (a_i - a_1) . phi = psi_i - (arg c_i - arg c_1), i = 2, 3
    let a = [
        [
            (exps[1][0] - exps[0][0]) as f64,
            (exps[1][1] - exps[0][1]) as f64,
        ],
        [
            (exps[2][0] - exps[0][0]) as f64,
            (exps[2][1] - exps[0][1]) as f64,
        ],
    ];
    let rhs = [
        (psi[1] - psi[0]) - (args[1] - args[0]),
        (psi[2] - psi[0]) - (args[2] - args[0]),
    ];
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if det.abs() < 1e-12 {
        return None;
    }
    Some([
        (rhs[0] * a[1][1] - rhs[1] * a[0][1]) / det,
        (rhs[1] * a[0][0] - rhs[0] * a[1][0]) / det,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_laurent;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() < tol, "{a} vs {b}");
    }

    #[test]
    fn quadratic_roots() {
        let f = parse_laurent("x1^2 - x1 - 1", 1).unwrap();
        let rs = roots_1d(&f).unwrap();
        assert_eq!(rs.degree_accounted, 2);
        let mut norms: Vec<f64> = rs.roots.iter().map(|r| r.value.norm()).collect();
        norms.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        close(norms[0], phi - 1.0, 1e-12);
        close(norms[1], phi, 1e-12);
        for r in &rs.roots {
            assert!(r.error < 1e-10);
        }
    }

    #[test]
    fn double_root_cluster() {
        let f = parse_laurent("1 + 2x1 + x1^2", 1).unwrap();
        let rs = roots_1d(&f).unwrap();
        assert_eq!(rs.roots.len(), 1);
        assert_eq!(rs.roots[0].multiplicity, 2);
        close(rs.roots[0].value.re, -1.0, 1e-9);
        close(rs.roots[0].value.im, 0.0, 1e-9);
    }

    #[test]
    fn extreme_scale_quadratic() {
        let f = parse_laurent("1 + x1 + 1/1000000000*x1^2", 1).unwrap();
        let am = amoeba_1d(&f).unwrap();
        assert_eq!(am.len(), 2);
        close(am[0].0, 0.0, 1e-7);
        close(am[1].0, 9.0 * 10f64.ln(), 1e-7);
    }

    #[test]
    fn quartic_power_multiplicity() {
        let f = parse_laurent("1 + 4x1 + 6x1^2 + 4x1^3 + x1^4", 1).unwrap();
        let am = amoeba_1d(&f).unwrap();
        let total: usize = am.iter().map(|p| p.1).sum();
        assert_eq!(total, 4);
        for (ln_norm, _, _) in &am {
            close(*ln_norm, 0.0, 1e-6);
        }
        // the refined cluster center is much sharper than the inclusion radius
        let rs = roots_1d(&f).unwrap();
        let big = rs.roots.iter().max_by_key(|r| r.multiplicity).unwrap();
        close(big.value.re, -1.0, 1e-10);
    }

    #[test]
    fn binomial_amoeba() {
        let f = parse_laurent("2 - x1", 1).unwrap();
        let am = amoeba_1d(&f).unwrap();
        assert_eq!(am.len(), 1);
        close(am[0].0, 2f64.ln(), 1e-13);

        let g = parse_laurent("1 - x1^100", 1).unwrap();
        let am = amoeba_1d(&g).unwrap();
        assert_eq!(am.len(), 100);
        for (l, _, _) in &am {
            close(*l, 0.0, 1e-9);
        }
    }

    #[test]
    fn residuals_within_radius() {
        let f = parse_laurent("3 - 5x1^2 + x1^3 + 2x1^4 + x1^7", 1).unwrap();
        let rs = roots_1d(&f).unwrap();
        let total: usize = rs.roots.iter().map(|r| r.multiplicity).sum();
        assert_eq!(total as i64, rs.degree_accounted);
        let coeffs: Vec<Complex64> = {
            let mut c = vec![Complex64::new(0.0, 0.0); 8];
            for t in f.terms() {
                let (re, im) = t.coeff.to_complex_f64();
                c[t.exponent[0] as usize] = Complex64::new(re, im);
            }
            c
        };
        for r in &rs.roots {
            let (p, dp) = eval_scaled(&coeffs, r.value);
            // residual small relative to the derivative-scaled radius
            let res = p.ln_abs().exp();
            let slope = dp.ln_abs().exp();
            assert!(res <= (r.error + 1e-12) * slope.max(1.0) * 10.0);
        }
    }

    #[test]
    fn fiber_sampling_line() {
        let f = parse_laurent("1 + x1 + x2", 2).unwrap();
        let grid = FiberGrid {
            moduli: vec![-(2f64.ln())],
            phases: 8,
        };
        let cloud = sample_amoeba_2d(&f, &grid).unwrap();
        assert_eq!(cloud.degenerate_fibers, 0);
        // fiber x2 = -1/2 (phase pi) gives root x1 = -1/2
        let target = [-(2f64.ln()), -(2f64.ln())];
        let best = cloud
            .points
            .iter()
            .map(|(p, _)| ((p[0] - target[0]).powi(2) + (p[1] - target[1]).powi(2)).sqrt())
            .fold(f64::INFINITY, f64::min);
        assert!(best < 1e-9, "best {best}");
    }

    #[test]
    fn fiber_sampling_cubic() {
        let f = parse_laurent("1 + x1^3 + x2^2 - 10*x1*x2", 2).unwrap();
        let grid = FiberGrid {
            moduli: vec![0.0],
            phases: 1,
        };
        let cloud = sample_amoeba_2d(&f, &grid).unwrap();
        // fiber x2 = 1: cubic 1 - 10 x1 + x1^3, three roots
        assert_eq!(cloud.points.len(), 3);
        for (p, _) in &cloud.points {
            assert_eq!(p[1], 0.0);
        }
    }

    #[test]
    fn directed_hausdorff_examples() {
        let a = SamplePoints::One(vec![(0.0, 0.0)]);
        let b = [-(2f64.ln()), 2f64.ln()];
        let (d, _) = directed_hausdorff(&a, &DistTarget::Cloud1(&b)).unwrap();
        close(d, 2f64.ln(), 1e-12);

        let f = parse_laurent("x1^2 - x1 - 1", 1).unwrap();
        let am = amoeba_1d(&f).unwrap();
        let pts = SamplePoints::One(am.iter().map(|p| (p.0, p.2)).collect());
        let trop = crate::tropical::archtrop_1d(&f).unwrap();
        let (d, _) = directed_hausdorff(&pts, &DistTarget::Slopes(&trop)).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        close(d, phi.ln(), 1e-9);
    }

    #[test]
    fn trinomial_phase_targeting() {
        let f = parse_laurent("1 + x1 + x2", 2).unwrap();
        let phi = trinomial_phases(&f, [0.0, 0.0]).unwrap();
        // verify 1 + e^{i phi1} + e^{i phi2} = 0
        let s = Complex64::new(1.0, 0.0)
            + Complex64::from_polar(1.0, phi[0])
            + Complex64::from_polar(1.0, phi[1]);
        assert!(s.norm() < 1e-12);

        // generic point on the tropical line: v = (-1, -1) region boundary?
        // use v = (1, 1): both x1 and x2 terms tie, constant is smaller
        let phi = trinomial_phases(&f, [1.0, 1.0]).unwrap();
        let e = std::f64::consts::E;
        let s = Complex64::new(1.0, 0.0)
            + Complex64::from_polar(e, phi[0])
            + Complex64::from_polar(e, phi[1]);
        assert!(s.norm() < 1e-12);
    }
}
