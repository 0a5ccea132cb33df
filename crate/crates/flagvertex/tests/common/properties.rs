//! Randomized kernel property suites, run through a seeded proptest runner so
//! that both the test harness and the acceptance runner see identical cases.

use flagvertex::kernel::{phi_shift, qpoch_with, Monomial, PhiProduct, Symbol, TruncatedSeries, Q};
use flagvertex::quiver::{enumerate_fixed_points, multinomial, FixedPointChain};
use flagvertex::vertex::{vertex_series, Insertion, SeriesConvention};
use flagvertex::{Error, FlagData, ParamPoint};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

/// Seed shared by every suite.
pub const SEED: [u8; 32] = *b"flagvertex-kernel-property-seed!";

/// Names of the suites, in run order.
pub const SUITES: [&str; 5] = ["splice", "phi-round-trip", "series-ring", "weyl", "fixed-points"];

fn runner(cases: u32) -> TestRunner {
    let cfg = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(cfg, TestRng::from_seed(RngAlgorithm::ChaCha, &SEED))
}

fn rational() -> impl Strategy<Value = Q> {
    (-40i64..=40, 1i64..=25)
        .prop_filter("nonzero", |(n, _)| *n != 0)
        .prop_map(|(n, d)| Q::new(BigInt::from(n), BigInt::from(d)))
}

fn generic_q() -> impl Strategy<Value = Q> {
    rational().prop_filter("q not a root of unity", |x| x != &Q::one() && x != &(-Q::one()))
}

fn fail(e: impl std::fmt::Display) -> TestCaseError {
    TestCaseError::fail(e.to_string())
}

/// `(x;q)_{m+n} = (x;q)_m (x q^m;q)_n` for all integer `m, n`.
fn splice(cases: u32) -> Result<(), String> {
    let strat = (rational(), generic_q(), -6i64..=6, -6i64..=6);
    runner(cases)
        .run(&strat, |(x, qq, m, n)| {
            let lhs = qpoch_with(&x, m + n, &qq);
            let a = qpoch_with(&x, m, &qq);
            let xm = &x * flagvertex::kernel::qpow(&qq, m).map_err(fail)?;
            let b = qpoch_with(&xm, n, &qq);
            match (lhs, a, b) {
                (Ok(l), Ok(a), Ok(b)) => prop_assert_eq!(l, a * b),
                (_, Err(Error::Pole(_)), _) | (_, _, Err(Error::Pole(_))) | (Err(Error::Pole(_)), _, _) => {}
                (l, a, b) => return Err(fail(format!("unexpected errors {l:?} {a:?} {b:?}"))),
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn symbol() -> impl Strategy<Value = Symbol> {
    prop_oneof![(0usize..3).prop_map(Symbol::A), (0usize..2, 0usize..2).prop_map(|(m, j)| Symbol::S(m, j))]
}

fn monomial() -> impl Strategy<Value = Monomial> {
    (symbol(), symbol(), -2i64..=2, -2i64..=2).prop_map(|(a, b, tp, qp)| {
        let m = if a == b { Monomial::var(a) } else { Monomial::ratio(a, b) };
        m.with_t(tp).with_q(qp)
    })
}

/// Shifting a symbol up then down restores the original factors and prefactor.
fn phi_round_trip(cases: u32) -> Result<(), String> {
    let strat = (prop::collection::vec((monomial(), -2i64..=2), 1..4), symbol(), prop::bool::ANY);
    runner(cases)
        .run(&strat, |(factors, s, up)| {
            let mut p = PhiProduct::one();
            for (m, e) in factors {
                p.push_phi(m, e);
            }
            let dir = if up { 1 } else { -1 };
            let back = phi_shift(&phi_shift(&p, &s, dir), &s, -dir);
            prop_assert_eq!(back.factors(), p.factors());
            prop_assert_eq!(back.prefactor(), p.prefactor(), "round trip changed the prefactor: {}", back);
            let none = phi_shift(&p, &s, 0);
            prop_assert_eq!(none.factors(), p.factors());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn series() -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec(((0i64..=3, 0i64..=3), rational()), 0..6).prop_map(|terms| {
        TruncatedSeries::from_terms(2, terms.into_iter().map(|((a, b), c)| (vec![a, b], c)), vec![3, 3])
    })
}

/// Commutative ring laws of truncated series (compared after truncation).
fn series_ring(cases: u32) -> Result<(), String> {
    let strat = (series(), series(), series(), rational());
    runner(cases)
        .run(&strat, |(a, b, c, k)| {
            let e = |x: flagvertex::Result<TruncatedSeries>| x.map_err(fail);
            prop_assert_eq!(e(a.add(&b))?, e(b.add(&a))?);
            prop_assert_eq!(e(a.mul(&b))?, e(b.mul(&a))?);
            prop_assert_eq!(e(e(a.mul(&b))?.mul(&c))?, e(a.mul(&e(b.mul(&c))?))?);
            prop_assert_eq!(e(a.mul(&e(b.add(&c))?))?, e(e(a.mul(&b))?.add(&e(a.mul(&c))?))?);
            prop_assert_eq!(e(a.add(&e(b.add(&c))?))?, e(e(a.add(&b))?.add(&c))?);
            let one = TruncatedSeries::constant(2, Q::one(), vec![3, 3]);
            prop_assert_eq!(e(a.mul(&one))?, a.clone());
            prop_assert!(e(a.sub(&a))?.is_zero());
            prop_assert_eq!(a.scale(&k).scale(&k.recip()), a.clone());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn flag_small() -> impl Strategy<Value = (Vec<usize>, usize)> {
    prop_oneof![Just((vec![1], 2)), Just((vec![1], 3)), Just((vec![2], 3)), Just((vec![1, 2], 3))]
}

/// Relabeling framing indices together with the equivariant parameters maps
/// vertex series to vertex series.
fn weyl(cases: u32) -> Result<(), String> {
    let strat = (flag_small(), 0usize..64, 0usize..6, prop::collection::vec(rational(), 3), rational());
    runner(cases)
        .run(&strat, |((v, w), pick, perm, avals, h)| {
            let order: Vec<i64> = vec![if v.len() == 1 { 2 } else { 1 }; v.len()];
            let mut a: Vec<Q> = avals.into_iter().take(w).collect();
            a.sort();
            a.dedup();
            prop_assume!(a.len() == w);
            let params = match ParamPoint::new(Q::new(1.into(), 2.into()), h, a.clone(), vec![], 4) {
                Ok(p) => p,
                Err(_) => return Err(TestCaseError::reject("guard")),
            };
            let flag = FlagData::new(v, w).map_err(fail)?;
            let points = enumerate_fixed_points(&flag);
            let p: &FixedPointChain = &points[pick % points.len()];
            let perms: Vec<Vec<usize>> = itertools::Itertools::permutations(0..w, w).collect();
            let sigma = &perms[perm % perms.len()];
            let mut ap = vec![Q::zero(); w];
            for k in 0..w {
                ap[sigma[k]] = a[k].clone();
            }
            let s1 = vertex_series(p, &Insertion::one(), &order, &params, SeriesConvention::Zh);
            let s2 = vertex_series(&p.permuted(sigma), &Insertion::one(), &order, &params.with_a(ap), SeriesConvention::Zh);
            match (s1, s2) {
                (Ok(x), Ok(y)) => prop_assert_eq!(x.series, y.series),
                (Err(Error::Pole(_)), Err(Error::Pole(_))) => {}
                (x, y) => return Err(fail(format!("asymmetric outcome {:?} / {:?}", x.err(), y.err()))),
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Fixed points of `T*Fl(v; w)` are counted by the multinomial of level sizes.
fn fixed_points(cases: u32) -> Result<(), String> {
    let strat = (1usize..=6).prop_flat_map(|w| (Just(w), prop::collection::vec(0usize..=w, 1..=3)));
    runner(cases)
        .run(&strat, |(w, mut v)| {
            v.sort_unstable();
            v.dedup();
            v.retain(|&x| x > 0 && x < w);
            prop_assume!(!v.is_empty());
            let flag = FlagData::new(v, w).map_err(fail)?;
            let pts = enumerate_fixed_points(&flag);
            prop_assert_eq!(pts.len() as u128, multinomial(&flag.level_sizes()));
            let mut seen = std::collections::BTreeSet::new();
            for p in &pts {
                prop_assert_eq!(p.flag(), flag.clone());
                prop_assert!(seen.insert(p.to_one_based()));
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Run one named suite.
pub fn run(name: &str, cases: u32) -> Result<(), String> {
    match name {
        "splice" => splice(cases),
        "phi-round-trip" => phi_round_trip(cases),
        "series-ring" => series_ring(cases),
        "weyl" => weyl(cases),
        "fixed-points" => fixed_points(cases),
        other => Err(format!("unknown suite {other}")),
    }
}
