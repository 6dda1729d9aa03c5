//! Brute-force references that share no code with the library solvers.

use num_traits::{Signed, Zero};
use permit_games::lp::Sense;
use permit_games::{LinearProgram, Rational};

/// Solves the square system `m · x = b` by Gauss-Jordan elimination.
/// `None` when `m` is singular.
pub fn solve_square(mut m: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let k = b.len();
    for col in 0..k {
        let pivot = (col..k).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        b.swap(col, pivot);
        let inv = Rational::from_integer(1.into()) / &m[col][col];
        for v in m[col].iter_mut() {
            *v *= &inv;
        }
        b[col] *= &inv;
        for r in 0..k {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..k {
                    let delta = &f * &m[col][c];
                    m[r][c] -= delta;
                }
                let delta = &f * &b[col];
                b[r] -= delta;
            }
        }
    }
    Some(b)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut pick = Vec::new();
    fn go(start: usize, n: usize, k: usize, pick: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pick.len() == k {
            out.push(pick.clone());
            return;
        }
        for i in start..n {
            pick.push(i);
            go(i + 1, n, k, pick, out);
            pick.pop();
        }
    }
    go(0, n, k, &mut pick, &mut out);
    out
}

fn feasible(lp: &LinearProgram, x: &[Rational]) -> bool {
    if x.iter().any(|v| v.is_negative()) {
        return false;
    }
    lp.matrix.iter().zip(&lp.senses).zip(&lp.rhs).all(|((row, sense), b)| {
        let lhs: Rational = row.iter().zip(x).map(|(a, v)| a * v).sum();
        match sense {
            Sense::Le => lhs <= *b,
            Sense::Ge => lhs >= *b,
            Sense::Eq => lhs == *b,
        }
    })
}

/// Maximum of the objective over all basic feasible solutions of an LP whose
/// variables are all bounded below by zero and have no upper bounds.
/// `None` when no basic feasible solution exists, which for such a pointed
/// polyhedron means the program is infeasible.
pub fn vertex_optimum(lp: &LinearProgram) -> Option<Rational> {
    let n = lp.objective.len();
    let m = lp.matrix.len();
    let mut best: Option<Rational> = None;
    // Candidate active sets: n hyperplanes out of the m rows plus the n axes.
    for active in combinations(m + n, n) {
        let mut mat = Vec::with_capacity(n);
        let mut rhs = Vec::with_capacity(n);
        for &a in &active {
            if a < m {
                mat.push(lp.matrix[a].clone());
                rhs.push(lp.rhs[a].clone());
            } else {
                let mut e = vec![Rational::zero(); n];
                e[a - m] = Rational::from_integer(1.into());
                mat.push(e);
                rhs.push(Rational::zero());
            }
        }
        let Some(x) = solve_square(mat, rhs) else { continue };
        if !feasible(lp, &x) {
            continue;
        }
        let value: Rational = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
        if best.as_ref().map_or(true, |b| value > *b) {
            best = Some(value);
        }
    }
    best
}

/// Water level by scanning candidate levels: the smallest `μ` among the claim
/// breakpoints and the interpolated levels with `Σ min(d_i, μ) ≥ estate`.
pub fn cea_by_scan(estate: &Rational, claims: &[Rational]) -> Vec<Rational> {
    let total: Rational = claims.iter().sum();
    if *estate >= total {
        return claims.to_vec();
    }
    let filled = |mu: &Rational| -> Rational { claims.iter().map(|d| d.min(mu).clone()).sum() };
    let mut breaks: Vec<Rational> = claims.to_vec();
    breaks.push(Rational::zero());
    breaks.sort();
    breaks.dedup();
    for w in breaks.windows(2) {
        let (lo, hi) = (&w[0], &w[1]);
        if filled(hi) >= *estate {
            // filled is linear on [lo, hi] with slope = number of claims above lo.
            let open = claims.iter().filter(|d| *d > lo).count() as i64;
            let mu = lo + (estate - filled(lo)) / Rational::from_integer(open.into());
            return claims.iter().map(|d| d.min(&mu).clone()).collect();
        }
    }
    unreachable!("estate below total claims is always reached")
}

/// CEL from its defining equation `Σ max(d_i - μ, 0) = estate`, scanning the
/// breakpoints from the top.
pub fn cel_by_scan(estate: &Rational, claims: &[Rational]) -> Vec<Rational> {
    let lost = |mu: &Rational| -> Rational {
        claims
            .iter()
            .map(|d| if d > mu { d - mu } else { Rational::zero() })
            .sum()
    };
    let mut breaks: Vec<Rational> = claims.to_vec();
    breaks.push(Rational::zero());
    breaks.sort();
    breaks.dedup();
    breaks.reverse();
    if estate.is_zero() {
        return vec![Rational::zero(); claims.len()];
    }
    for w in breaks.windows(2) {
        let (hi, lo) = (&w[0], &w[1]);
        if lost(lo) >= *estate {
            let open = claims.iter().filter(|d| *d >= hi).count() as i64;
            let mu = hi - (estate - lost(hi)) / Rational::from_integer(open.into());
            return claims
                .iter()
                .map(|d| if *d > mu { d - &mu } else { Rational::zero() })
                .collect();
        }
    }
    claims.to_vec()
}
