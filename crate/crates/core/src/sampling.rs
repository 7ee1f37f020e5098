//! Random instances that satisfy a theorem's hypotheses by construction.
//!
//! Each generator draws parameters from fixed boxes and rejects draws that
//! miss a majorization or membership condition. The result always passes
//! [`TheoremCase::check`].

use rand::{Rng, RngExt};

use crate::error::{Error, Result};
use crate::majorization::{
    self, apply_t_transform, chain_products, in_script_l, ParamMatrix2xN, RealVector, TTransform,
};
use crate::theorems::{
    AlphaVectors, BetaGaps, MatrixChain, ProportionsAlpha, ProportionsBeta, TheoremCase, TheoremId,
    TwoMixtures,
};

/// Draws per instance before giving up.
pub const MAX_REJECTIONS: usize = 100_000;

fn uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}

fn vector<R: Rng + ?Sized>(rng: &mut R, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| uniform(rng, lo, hi)).collect()
}

fn ascending<R: Rng + ?Sized>(rng: &mut R, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    let mut v = vector(rng, n, lo, hi);
    v.sort_by(f64::total_cmp);
    v
}

/// A weight vector in descending order, entries bounded away from zero.
fn descending_simplex<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut v = vector(rng, n, 0.05, 1.0);
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

fn size<R: Rng + ?Sized>(rng: &mut R) -> usize {
    rng.random_range(2..=4)
}

fn pair<R: Rng + ?Sized>(rng: &mut R, n: usize) -> (usize, usize) {
    let i = rng.random_range(0..n);
    let j = (i + rng.random_range(1..n)) % n;
    (i, j)
}

fn transform<R: Rng + ?Sized>(rng: &mut R, (i, j): (usize, usize)) -> Result<TTransform> {
    TTransform::new(uniform(rng, 0.0, 1.0), i, j)
}

fn rejection<T, R: Rng + ?Sized>(
    id: TheoremId,
    rng: &mut R,
    mut draw: impl FnMut(&mut R) -> Result<Option<T>>,
) -> Result<T> {
    for _ in 0..MAX_REJECTIONS {
        if let Some(v) = draw(rng)? {
            return Ok(v);
        }
    }
    Err(Error::invalid(format!("no {id} instance after {MAX_REJECTIONS} draws")))
}

fn rv(v: &[f64]) -> Result<RealVector> {
    RealVector::new(v.to_vec())
}

/// `(p; tau)` in `L_n` with `p` descending and `tau` ascending in `[lo, hi)`.
fn script_l_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize, lo: f64, hi: f64) -> Result<ParamMatrix2xN> {
    let p = descending_simplex(rng, n);
    let tau = ascending(rng, n, lo, hi);
    ParamMatrix2xN::from_rows(&p, &tau)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ChainShape {
    SinglePair,
    AnyPairs,
    SharedPair,
    StagesInL,
}

fn chain_shape(id: TheoremId) -> ChainShape {
    match id {
        TheoremId::T3_4 | TheoremId::T3_7 => ChainShape::SinglePair,
        TheoremId::C3_2 | TheoremId::C3_3 => ChainShape::SharedPair,
        TheoremId::T3_6 | TheoremId::T3_9 => ChainShape::StagesInL,
        _ => ChainShape::AnyPairs,
    }
}

fn matrix_chain<R: Rng + ?Sized>(
    id: TheoremId,
    rng: &mut R,
    row_lo: f64,
    row_hi: f64,
    fixed: f64,
) -> Result<MatrixChain> {
    let shape = chain_shape(id);
    rejection(id, rng, |rng| {
        let n = if shape == ChainShape::SinglePair { 2 } else { rng.random_range(3..=4) };
        let p_mat = script_l_matrix(rng, n, row_lo, row_hi)?;
        let k = match shape {
            ChainShape::StagesInL => rng.random_range(2..=3),
            _ => rng.random_range(1..=3),
        };
        let shared = pair(rng, n);
        let mut chain = Vec::with_capacity(k);
        for _ in 0..k {
            let pr = match shape {
                ChainShape::AnyPairs | ChainShape::StagesInL => pair(rng, n),
                ChainShape::SinglePair | ChainShape::SharedPair => shared,
            };
            chain.push(transform(rng, pr)?);
        }
        if shape == ChainShape::StagesInL {
            let stages = chain_products(&p_mat, &chain)?;
            if !stages[..k - 1].iter().all(in_script_l) {
                return Ok(None);
            }
        }
        Ok(Some(MatrixChain { p_mat, q_mat: None, chain, fixed }))
    })
}

fn theorem_3_1<R: Rng + ?Sized>(rng: &mut R) -> Result<ProportionsAlpha> {
    let n = size(rng);
    let alpha = ascending(rng, n, 0.1, 5.0);
    let beta = uniform(rng, 0.1, 20.0);
    rejection(TheoremId::T3_1, rng, |rng| {
        let p = descending_simplex(rng, n);
        let p_star = descending_simplex(rng, n);
        let ok = majorization::weak_submajorizes(&rv(&p)?, &rv(&p_star)?)?;
        Ok(ok.then(|| ProportionsAlpha { alpha: alpha.clone(), beta, p, p_star }))
    })
}

fn corollary_3_1<R: Rng + ?Sized>(rng: &mut R) -> Result<ProportionsAlpha> {
    let n = size(rng);
    let alpha = ascending(rng, n, 0.1, 5.0);
    let beta = uniform(rng, 0.1, 20.0);
    let p = descending_simplex(rng, n);
    let row = ParamMatrix2xN::from_rows(&p, &alpha)?;
    let pr = pair(rng, n);
    let moved = apply_t_transform(&row, &transform(rng, pr)?)?;
    let mut p_star = moved.row1().as_slice().to_vec();
    p_star.sort_by(|a, b| b.total_cmp(a));
    Ok(ProportionsAlpha { alpha, beta, p, p_star })
}

fn theorem_3_2<R: Rng + ?Sized>(rng: &mut R) -> Result<ProportionsBeta> {
    let n = size(rng);
    let beta = ascending(rng, n, 0.1, 20.0);
    let alpha = uniform(rng, 0.1, 5.0);
    rejection(TheoremId::T3_2, rng, |rng| {
        let p = descending_simplex(rng, n);
        let p_star = descending_simplex(rng, n);
        let ok = majorization::weak_supermajorizes(&rv(&p)?, &rv(&p_star)?)?;
        Ok(ok.then(|| ProportionsBeta { beta: beta.clone(), alpha, p, p_star }))
    })
}

fn theorem_3_3<R: Rng + ?Sized>(rng: &mut R) -> Result<AlphaVectors> {
    let n = size(rng);
    let beta = uniform(rng, 0.05, 0.95);
    let p = descending_simplex(rng, n);
    rejection(TheoremId::T3_3, rng, |rng| {
        let alpha = ascending(rng, n, 0.1, 5.0);
        let alpha_star = ascending(rng, n, 0.1, 5.0);
        let ok = majorization::weak_supermajorizes(&rv(&alpha)?, &rv(&alpha_star)?)?;
        Ok(ok.then(|| AlphaVectors { alpha, alpha_star, beta, p: p.clone() }))
    })
}

/// `beta` spread within `s`, consecutive `beta*` values at least `s` apart.
fn theorem_3_10<R: Rng + ?Sized>(rng: &mut R) -> Result<BetaGaps> {
    let n = size(rng);
    let s = uniform(rng, 0.05, 1.0);
    let b0 = uniform(rng, 0.1, 5.0);
    let beta: Vec<f64> = (0..n).map(|i| if i == 0 { b0 } else { b0 + uniform(rng, 0.0, s) }).collect();
    let mut beta_star = Vec::with_capacity(n);
    let mut c = uniform(rng, 0.1, 5.0);
    for _ in 0..n {
        beta_star.push(c);
        c += s + uniform(rng, 0.0, 3.0);
    }
    Ok(BetaGaps {
        beta,
        beta_star,
        alpha: uniform(rng, 0.1, 5.0),
        p: descending_simplex(rng, n),
        p_star: descending_simplex(rng, n),
    })
}

fn max(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn min(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::INFINITY, f64::min)
}

fn theorem_3_11<R: Rng + ?Sized>(rng: &mut R) -> Result<TwoMixtures> {
    let n = size(rng);
    let alpha = vector(rng, n, 0.5, 8.0);
    let beta = vector(rng, n, 0.1, 10.0);
    let alpha_star = vector(rng, n, 0.1, min(&alpha));
    let top = max(&alpha.iter().zip(&beta).map(|(a, b)| a * b).collect::<Vec<_>>());
    let beta_star = alpha_star.iter().map(|a| top / a * (1.0 + uniform(rng, 0.0, 1.0))).collect();
    Ok(TwoMixtures {
        alpha,
        beta,
        alpha_star,
        beta_star,
        p: descending_simplex(rng, n),
        p_star: descending_simplex(rng, n),
    })
}

fn theorem_3_12<R: Rng + ?Sized>(rng: &mut R) -> Result<TwoMixtures> {
    let n = size(rng);
    let alpha = vector(rng, n, 0.1, 6.0);
    let hi = max(&alpha);
    let alpha_star = vector(rng, n, hi, hi + 8.0);
    let beta_star = vector(rng, n, 0.1, 10.0);
    let top = max(&alpha_star.iter().zip(&beta_star).map(|(a, b)| a * b).collect::<Vec<_>>());
    let beta = alpha.iter().map(|a| top / a * (1.0 + uniform(rng, 0.0, 1.0))).collect();
    Ok(TwoMixtures {
        alpha,
        beta,
        alpha_star,
        beta_star,
        p: descending_simplex(rng, n),
        p_star: descending_simplex(rng, n),
    })
}

/// One instance of `id` whose hypotheses all hold.
pub fn hypothesis_instance<R: Rng + ?Sized>(id: TheoremId, rng: &mut R) -> Result<TheoremCase> {
    Ok(match id {
        TheoremId::T3_1 => TheoremCase::T3_1(theorem_3_1(rng)?),
        TheoremId::C3_1 => TheoremCase::C3_1(corollary_3_1(rng)?),
        TheoremId::T3_2 => TheoremCase::T3_2(theorem_3_2(rng)?),
        TheoremId::T3_3 => TheoremCase::T3_3(theorem_3_3(rng)?),
        TheoremId::T3_4 | TheoremId::T3_5 | TheoremId::T3_6 | TheoremId::C3_2 => {
            let beta = uniform(rng, 0.05, 0.95);
            let mc = matrix_chain(id, rng, 0.1, 5.0, beta)?;
            match id {
                TheoremId::T3_4 => TheoremCase::T3_4(mc),
                TheoremId::T3_5 => TheoremCase::T3_5(mc),
                TheoremId::T3_6 => TheoremCase::T3_6(mc),
                _ => TheoremCase::C3_2(mc),
            }
        }
        TheoremId::T3_7 | TheoremId::T3_8 | TheoremId::T3_9 | TheoremId::C3_3 => {
            let alpha = uniform(rng, 0.1, 5.0);
            let mc = matrix_chain(id, rng, 0.1, 20.0, alpha)?;
            match id {
                TheoremId::T3_7 => TheoremCase::T3_7(mc),
                TheoremId::T3_8 => TheoremCase::T3_8(mc),
                TheoremId::T3_9 => TheoremCase::T3_9(mc),
                _ => TheoremCase::C3_3(mc),
            }
        }
        TheoremId::T3_10 => TheoremCase::T3_10(theorem_3_10(rng)?),
        TheoremId::T3_11 => TheoremCase::T3_11(theorem_3_11(rng)?),
        TheoremId::T3_12 => TheoremCase::T3_12(theorem_3_12(rng)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn every_instance_satisfies_its_hypotheses() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for id in TheoremId::ALL {
            for _ in 0..200 {
                let case = hypothesis_instance(id, &mut rng).unwrap();
                assert_eq!(case.id(), id);
                let r = case.check().unwrap();
                assert!(r.all_held, "{id}: {r:?}");
            }
        }
    }

    #[test]
    fn same_seed_same_instances() {
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..5).map(|_| hypothesis_instance(TheoremId::T3_11, &mut rng).unwrap()).collect::<Vec<_>>()
        };
        assert_eq!(draw(3), draw(3));
        assert_ne!(draw(3), draw(4));
    }
}
