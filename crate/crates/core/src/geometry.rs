//! Quasi-geodesic constants for a graded submonoid and their empirical
//! verification.
//!
//! Products over the generators trace paths in the Cayley tree of the
//! ambient free group. For a graded submonoid these paths are uniform
//! quasi-geodesics, with constants computable from the maximal generator
//! length `L` and the factorization statistic `ζ`:
//!
//! - `K = 0`: geodesic polygons in a tree are 0-thin;
//! - `L' = ζ(max(2K + L + 1, 3))`: evaluating `ζ` at the conventional floor
//!   of three keeps the constant a sound upper bound (`ζ` is monotone) and
//!   pins the certified cutoff values produced by this crate;
//! - `λ = max(L, L')`, `ε = max(3L, 2L + 1/L')`;
//! - `R = ε(λ² + 1)`: in a tree, a continuous (λ,ε)-quasi-geodesic stays
//!   within that distance of the geodesic between its endpoints (see
//!   `docs/constants.md` for the derivation);
//! - `R' = 2R + L/2` and the word-problem cutoff
//!   `C_wp = R' + L·ζ(L·ζ(2R' + L) + 2R') + L·ζ(2R' + L)`.
//!
//! All derived constants are exact rationals; `ζ` is evaluated at the floor
//! of its (possibly fractional) argument, which is exact because distances
//! are integers.

use num_rational::Ratio;
use num_traits::ToPrimitive;

use crate::error::{Budget, Error, Result};
use crate::graded::{require_graded, ZetaEvaluator};
use crate::submonoid::{SWord, SubmonoidSpec};
use crate::words::ReducedWord;

pub type Rat = Ratio<i64>;

/// The computed constants for one submonoid spec.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantsRecord {
    /// Polyhyperbolicity constant of the ambient Cayley graph; 0 for trees.
    pub k: usize,
    /// Maximal generator length.
    pub l: usize,
    /// `ζ` evaluated at the gradedness radius (floored at 3).
    pub l_prime: usize,
    /// Quasi-geodesic multiplicative constant `max(L, L')`.
    pub lambda: usize,
    /// Quasi-geodesic additive constant `max(3L, 2L + 1/L')`.
    pub epsilon: Rat,
    /// Quasi-geodesic stability bound `ε(λ² + 1)`.
    pub r: Rat,
    /// `2R + L/2`.
    pub r_prime: Rat,
    /// Ball radius of the gradedness test, `2K + L + 1`.
    pub c_grd: usize,
    /// Certified word-problem cutoff, when computable within budget.
    pub c_wp: Option<Rat>,
    /// Why `c_wp` is absent (the offending `ζ` argument), when it is.
    pub c_wp_obstruction: Option<String>,
}

fn rat(n: usize) -> Rat {
    Rat::from_integer(n as i64)
}

fn floor_usize(x: Rat) -> usize {
    x.floor().to_integer().to_usize().unwrap_or(0)
}

/// Radius at which `ζ` is evaluated for `L'`.
pub fn l_prime_radius(spec: &SubmonoidSpec) -> usize {
    (spec.max_generator_len() + 1).max(3)
}

/// Computes the full constants record. Requires a graded input; the
/// word-problem cutoff `C_wp` is attempted within budget and reported as an
/// obstruction when its `ζ` arguments are out of reach.
pub fn constants(spec: &SubmonoidSpec, budget: &Budget) -> Result<ConstantsRecord> {
    require_graded(spec, budget)?;
    let mut zeta = ZetaEvaluator::new(spec, budget)?;

    let k = 0usize;
    let l = spec.max_generator_len();
    let c_grd = 2 * k + l + 1;
    let l_prime = zeta.eval(l_prime_radius(spec), budget)?;
    let lambda = l.max(l_prime);
    // L' >= 1 because some generator lies within the evaluation radius.
    let epsilon = std::cmp::max(rat(3 * l), rat(2 * l) + rat(1) / rat(l_prime));
    let r = epsilon * rat(lambda * lambda + 1);
    let r_prime = rat(2) * r + rat(l) / rat(2);

    let mut eval_zeta = |arg: Rat| -> Result<usize> {
        let n = floor_usize(arg);
        zeta.eval(n, budget).map_err(|e| match e {
            Error::ResourceLimit { used, budget, .. } => Error::ResourceLimit {
                what: format!("zeta evaluation at argument {n}"),
                used,
                budget,
            },
            other => other,
        })
    };

    let (c_wp, c_wp_obstruction) = match compute_c_wp(l, r_prime, &mut eval_zeta) {
        Ok(v) => (Some(v), None),
        Err(Error::ResourceLimit { what, .. }) => (None, Some(what)),
        Err(other) => return Err(other),
    };

    Ok(ConstantsRecord {
        k,
        l,
        l_prime,
        lambda,
        epsilon,
        r,
        r_prime,
        c_grd,
        c_wp,
        c_wp_obstruction,
    })
}

fn compute_c_wp(
    l: usize,
    r_prime: Rat,
    zeta: &mut impl FnMut(Rat) -> Result<usize>,
) -> Result<Rat> {
    let inner = zeta(rat(2) * r_prime + rat(l))?;
    let outer = zeta(rat(l * inner) + rat(2) * r_prime)?;
    Ok(r_prime + rat(l * outer) + rat(l * inner))
}

/// A word over the generators together with its partial products: the
/// vertex skeleton of the path it traces from the identity.
#[derive(Clone, Debug)]
pub struct PathSample {
    pub word: SWord,
    pub vertices: Vec<ReducedWord>,
}

impl PathSample {
    pub fn new(spec: &SubmonoidSpec, word: SWord) -> Result<PathSample> {
        spec.check_sword(&word)?;
        let mut vertices = Vec::with_capacity(word.len() + 1);
        let mut acc = spec.identity();
        vertices.push(acc.clone());
        for i in word.iter() {
            acc = acc.mul(spec.generator(i))?;
            vertices.push(acc.clone());
        }
        Ok(PathSample { word, vertices })
    }
}

/// Which side of the quasi-geodesic sandwich a violation breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// `d(w_i, w_j) > L · |i − j|`.
    UpperBound,
    /// `|i − j| > L' · d(w_i, w_j)`.
    LowerBound,
}

#[derive(Clone, Debug)]
pub struct QgViolation {
    pub word_index: usize,
    pub i: usize,
    pub j: usize,
    pub dist: usize,
    pub kind: ViolationKind,
}

/// Checks the integer-parameter quasi-geodesic inequalities
/// `d(w_i, w_j) ≤ L·|i−j|` and `|i−j| ≤ L'·d(w_i, w_j)` for every vertex
/// pair of every sample word, returning all violations.
pub fn verify_quasigeodesic(
    spec: &SubmonoidSpec,
    consts: &ConstantsRecord,
    samples: &[SWord],
) -> Result<Vec<QgViolation>> {
    let mut violations = Vec::new();
    for (word_index, word) in samples.iter().enumerate() {
        let path = PathSample::new(spec, word.clone())?;
        let n = path.vertices.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let d = path.vertices[i].dist(&path.vertices[j])?;
                if d > consts.l * (j - i) {
                    violations.push(QgViolation {
                        word_index,
                        i,
                        j,
                        dist: d,
                        kind: ViolationKind::UpperBound,
                    });
                }
                if (j - i) > consts.l_prime * d {
                    violations.push(QgViolation {
                        word_index,
                        i,
                        j,
                        dist: d,
                        kind: ViolationKind::LowerBound,
                    });
                }
            }
        }
    }
    Ok(violations)
}

/// Maximum deviation of the path's vertices from the tree geodesic between
/// its endpoints (the prefix set of the reduced endpoint word).
pub fn hausdorff_check(spec: &SubmonoidSpec, word: &SWord) -> Result<usize> {
    let path = PathSample::new(spec, word.clone())?;
    let endpoint = path.vertices.last().expect("paths have a vertex");
    let mut max_dev = 0usize;
    for v in &path.vertices {
        let mut best = usize::MAX;
        for cut in 0..=endpoint.len() {
            let p = endpoint.prefix(cut);
            best = best.min(v.dist(&p)?);
        }
        max_dev = max_dev.max(best);
    }
    Ok(max_dev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn spec(rank: u8, gens: &[&str]) -> SubmonoidSpec {
        SubmonoidSpec::parse(rank, gens).unwrap()
    }

    fn ex1() -> SubmonoidSpec {
        spec(2, &["a", "b", "ABab"])
    }

    #[test]
    fn single_generator_constant_chain() {
        let c = constants(&spec(1, &["a"]), &Budget::default()).unwrap();
        assert_eq!(c.k, 0);
        assert_eq!(c.l, 1);
        assert_eq!(c.l_prime, 3);
        assert_eq!(c.lambda, 3);
        assert_eq!(c.epsilon, rat(3));
        assert_eq!(c.r, rat(30));
        assert_eq!(c.r_prime, Rat::new(121, 2));
        assert_eq!(c.c_grd, 2);
        assert_eq!(c.c_wp, Some(Rat::new(851, 2)));
        assert!(c.c_wp_obstruction.is_none());
    }

    #[test]
    fn two_letter_loop_constant_chain() {
        let c = constants(&spec(2, &["ab"]), &Budget::default()).unwrap();
        assert_eq!(c.l, 2);
        assert_eq!(c.l_prime, 1);
        assert_eq!(c.lambda, 2);
        assert_eq!(c.epsilon, rat(6));
        assert_eq!(c.c_grd, 3);
        // M is a single loop, so the big zeta arguments stay feasible.
        assert!(c.c_wp.is_some());
    }

    #[test]
    fn c_grd_is_l_plus_one() {
        for s in [spec(1, &["a"]), spec(2, &["ab"]), ex1()] {
            let c = constants(&s, &Budget::default()).unwrap();
            assert_eq!(c.c_grd, c.l + 1);
        }
    }

    #[test]
    fn formula_coherence() {
        for s in [spec(1, &["a"]), spec(2, &["ab"]), ex1()] {
            let b = Budget::default();
            let c = constants(&s, &b).unwrap();
            assert_eq!(c.l, s.max_generator_len());
            let mut zeta = ZetaEvaluator::new(&s, &b).unwrap();
            assert_eq!(c.l_prime, zeta.eval(l_prime_radius(&s), &b).unwrap());
            assert_eq!(c.lambda, c.l.max(c.l_prime));
            assert_eq!(
                c.epsilon,
                std::cmp::max(rat(3 * c.l), rat(2 * c.l) + rat(1) / rat(c.l_prime))
            );
            assert_eq!(c.r, c.epsilon * rat(c.lambda * c.lambda + 1));
            assert_eq!(c.r_prime, rat(2) * c.r + rat(c.l) / rat(2));
            if let Some(c_wp) = c.c_wp {
                let inner = zeta
                    .eval(floor_usize(rat(2) * c.r_prime + rat(c.l)), &b)
                    .unwrap();
                let outer = zeta
                    .eval(floor_usize(rat(c.l * inner) + rat(2) * c.r_prime), &b)
                    .unwrap();
                assert_eq!(c_wp, c.r_prime + rat(c.l * outer) + rat(c.l * inner));
            }
        }
    }

    #[test]
    fn commutator_fixture_constants_exist_without_c_wp() {
        let c = constants(&ex1(), &Budget::default()).unwrap();
        assert_eq!(c.l, 4);
        assert_eq!(c.c_grd, 5);
        assert!(c.lambda >= c.l);
        // The positive monoid inside makes the big zeta radii infeasible.
        assert!(c.c_wp.is_none());
        assert!(c.c_wp_obstruction.as_deref().unwrap().contains("zeta"));
    }

    #[test]
    fn not_graded_is_rejected() {
        let s = spec(3, &["ba", "c", "CA", "BA"]);
        assert!(matches!(
            constants(&s, &Budget::default()),
            Err(Error::NotGraded { .. })
        ));
    }

    #[test]
    fn monotone_under_added_generator() {
        let b = Budget::default();
        let small = constants(&spec(1, &["a"]), &b).unwrap();
        let large = constants(&spec(1, &["a", "aa"]), &b).unwrap();
        assert!(large.l >= small.l);
        assert!(large.l_prime >= small.l_prime);
        assert!(large.lambda >= small.lambda);

        let small = constants(&spec(2, &["ab"]), &b).unwrap();
        let large = constants(&spec(2, &["ab", "abab"]), &b).unwrap();
        assert!(large.l >= small.l);
        assert!(large.l_prime >= small.l_prime);
        assert!(large.lambda >= small.lambda);
    }

    #[test]
    fn geodesic_powers_have_no_violations() {
        let s = spec(1, &["a"]);
        let c = constants(&s, &Budget::default()).unwrap();
        let samples: Vec<SWord> = (0..=20).map(|n| SWord(vec![0; n])).collect();
        assert!(verify_quasigeodesic(&s, &c, &samples).unwrap().is_empty());
        assert_eq!(hausdorff_check(&s, &SWord(vec![0, 0, 0])).unwrap(), 0);
    }

    #[test]
    fn random_words_in_graded_fixture_have_no_violations() {
        let s = ex1();
        let c = constants(&s, &Budget::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0x9E0);
        let mut samples = Vec::new();
        for _ in 0..1000 {
            let len = rng.random_range(0..=30usize);
            samples.push(SWord((0..len).map(|_| rng.random_range(0..3u16)).collect()));
        }
        assert!(verify_quasigeodesic(&s, &c, &samples).unwrap().is_empty());
        let r_floor = c.r.to_integer();
        for word in &samples {
            let dev = hausdorff_check(&s, word).unwrap() as i64;
            assert!(dev <= r_floor, "deviation {dev} exceeds R = {}", c.r);
        }
    }

    #[test]
    fn pumping_word_violates_imposed_constants() {
        // The pumping monoid with imposed constants L = 2, L' = 3: the word
        // (ba)^6 c (c⁻¹a⁻¹) (b⁻¹a⁻¹)^6 travels 14 letters between vertices
        // at distance 1.
        let s = spec(3, &["ba", "c", "CA", "BA"]);
        let consts = ConstantsRecord {
            k: 0,
            l: 2,
            l_prime: 3,
            lambda: 3,
            epsilon: rat(6),
            r: rat(60),
            r_prime: rat(121),
            c_grd: 3,
            c_wp: None,
            c_wp_obstruction: None,
        };
        let mut word = vec![0u16; 6];
        word.push(1);
        word.push(2);
        word.extend(vec![3u16; 6]);
        let violations = verify_quasigeodesic(&s, &consts, &[SWord(word)]).unwrap();
        assert!(violations
            .iter()
            .any(|v| v.i == 0 && v.j == 14 && v.kind == ViolationKind::LowerBound));
    }

    #[test]
    fn hausdorff_on_relation_word() {
        let s = ex1();
        let c = constants(&s, &Budget::default()).unwrap();
        let word = s.parse_sword("[b][a][ABab]").unwrap();
        let dev = hausdorff_check(&s, &word).unwrap() as i64;
        assert!(dev <= c.r.to_integer());

        let loops = spec(2, &["ab"]);
        let w2 = loops.parse_sword("[ab][ab]").unwrap();
        assert_eq!(hausdorff_check(&loops, &w2).unwrap(), 0);
    }
}
