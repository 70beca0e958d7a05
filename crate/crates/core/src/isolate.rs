//! Intersection of tropical hypersurfaces of a square system and isolation
//! of all possible root-norm vectors in balls around the candidates.

use num::bigint::BigInt;
use num::rational::BigRational;

use crate::error::{Error, Result};
use crate::exactlog::ExactLogValue;
use crate::linsolve::{solve_system, SolveOutcome};
use crate::poly::LaurentPoly;
use crate::tropical::{member_log, Membership};

/// An isolated point of the tropical intersection, with exact coordinates.
#[derive(Debug, Clone)]
pub struct CandidatePoint {
    pub coords: Vec<ExactLogValue>,
    /// per polynomial, the tying term pair that defined the point
    pub witness: Vec<[usize; 2]>,
}

#[derive(Debug, Clone)]
pub struct IntersectionResult {
    pub points: Vec<CandidatePoint>,
    /// term-pair tuples whose tie lines agree in positive dimension inside
    /// every tropical set; their components are reported, not enumerated
    pub nonisolated: Vec<Vec<[usize; 2]>>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

/// All isolated points of the intersection of the `ArchTrop(f_i)`.
///
/// Enumerates one tying term pair per polynomial, solves the resulting
/// log-linear system exactly, and keeps solutions that pass exact
/// membership on every polynomial.
pub fn intersect_tropical(fs: &[LaurentPoly]) -> Result<IntersectionResult> {
    let k = fs.len();
    if k == 0 {
        return Err(Error::BadSystemShape);
    }
    let n = fs[0].n();
    if k != n || fs.iter().any(|f| f.n() != n) {
        return Err(Error::BadSystemShape);
    }
    if fs.iter().any(|f| f.term_count() < 2) {
        return Err(Error::SinglePoint);
    }

    let pairs: Vec<Vec<[usize; 2]>> = fs
        .iter()
        .map(|f| {
            let t = f.term_count();
            let mut v = Vec::new();
            for p in 0..t {
                for q in (p + 1)..t {
                    v.push([p, q]);
                }
            }
            v
        })
        .collect();

    let mut result = IntersectionResult {
        points: Vec::new(),
        nonisolated: Vec::new(),
    };
    let mut tuple = vec![0usize; k];
    loop {
        let witness: Vec<[usize; 2]> = (0..k).map(|i| pairs[i][tuple[i]]).collect();
        process_tuple(fs, &witness, &mut result)?;
        // odometer over the pair tuples
        let mut pos = 0;
        loop {
            if pos == k {
                return Ok(result);
            }
            tuple[pos] += 1;
            if tuple[pos] < pairs[pos].len() {
                break;
            }
            tuple[pos] = 0;
            pos += 1;
        }
    }
}

fn process_tuple(
    fs: &[LaurentPoly],
    witness: &[[usize; 2]],
    result: &mut IntersectionResult,
) -> Result<()> {
    let n = fs[0].n();
    // (a_p - a_q) . v = log|c_q| - log|c_p| for each chosen pair
    let mut a = Vec::with_capacity(fs.len());
    let mut b = Vec::with_capacity(fs.len());
    for (f, &[p, q]) in fs.iter().zip(witness) {
        let tp = &f.terms()[p];
        let tq = &f.terms()[q];
        a.push(
            (0..n)
                .map(|c| rat(tp.exponent[c] - tq.exponent[c]))
                .collect::<Vec<_>>(),
        );
        b.push(tq.coeff.log_mag().sub(&tp.coeff.log_mag()));
    }
    match solve_system(&a, &b)? {
        SolveOutcome::Inconsistent => {}
        SolveOutcome::Unique(v) => {
            for f in fs {
                if member_log(f, &v)?.status != Membership::In {
                    return Ok(());
                }
            }
            if !result.points.iter().any(|p| p.coords == v) {
                result.points.push(CandidatePoint {
                    coords: v,
                    witness: witness.to_vec(),
                });
            }
        }
        SolveOutcome::Underdetermined {
            particular,
            nullspace,
        } => {
            // probe the solution set; if every sample is in every tropical
            // set, a positive-dimensional component exists
            let mut samples = vec![particular.clone()];
            for dir in &nullspace {
                for step in [-2i64, -1, 1, 2] {
                    let s: Vec<ExactLogValue> = particular
                        .iter()
                        .zip(dir)
                        .map(|(p, d)| p.add(&ExactLogValue::from_rational(d * rat(step))))
                        .collect();
                    samples.push(s);
                }
            }
            let mut hits = 0usize;
            'probe: for s in &samples {
                for f in fs {
                    if member_log(f, s)?.status != Membership::In {
                        continue 'probe;
                    }
                }
                hits += 1;
            }
            // two or more distinct common points on the solution line
            // indicate a positive-dimensional overlap
            if hits >= 2 {
                result.nonisolated.push(witness.to_vec());
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct IsolationRegion {
    pub center: CandidatePoint,
    /// per polynomial: log(t_i - 1)
    pub radii: Vec<ExactLogValue>,
}

/// One ball-intersection region per candidate point; the effective region
/// is the concentric ball of the smallest radius.
pub fn isolation_regions(points: &[CandidatePoint], fs: &[LaurentPoly]) -> Vec<IsolationRegion> {
    let radii: Vec<ExactLogValue> = fs
        .iter()
        .map(|f| ExactLogValue::log_of_int((f.term_count() - 1) as u64))
        .collect();
    points
        .iter()
        .map(|p| IsolationRegion {
            center: p.clone(),
            radii: radii.clone(),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Containment {
    In,
    Out,
    Unknown,
}

/// Error-aware containment of `w` (with radius `err`) in the region.
pub fn region_contains(region: &IsolationRegion, w: &[f64], err: f64) -> Containment {
    let mut d2 = 0.0f64;
    let mut cerr = 0.0f64;
    for (wc, cc) in w.iter().zip(&region.center.coords) {
        let (c, e) = cc.approx();
        d2 += (wc - c) * (wc - c);
        cerr += e;
    }
    let d = d2.sqrt();
    let mut rmin = f64::INFINITY;
    let mut rerr = 0.0f64;
    for r in &region.radii {
        let (v, e) = r.approx();
        if v < rmin {
            rmin = v;
            rerr = e;
        }
    }
    let slack = err + cerr + rerr;
    if d + slack < rmin {
        Containment::In
    } else if d - slack > rmin {
        Containment::Out
    } else {
        Containment::Unknown
    }
}
