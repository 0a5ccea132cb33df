//! Shared fixtures for the benchmarks.

use flagvertex::kernel::{int, rat};
use flagvertex::xxz::random_params;
use flagvertex::{FlagData, ParamPoint};

/// `q^{1/2} = 1/2`, `ℏ^{1/2} = 1/3`, `a = (2, 3, 5, 7)[..w]`, guard sized for `order`.
pub fn series_point(w: usize, order: usize) -> ParamPoint {
    let a = [int(2), int(3), int(5), int(7)];
    ParamPoint::new(rat(1, 2), rat(1, 3), a[..w].to_vec(), vec![], ParamPoint::default_guard(order, w))
        .expect("generic point")
}

/// Flag data used by the vertex benchmarks, with a label.
pub fn flags() -> Vec<(&'static str, FlagData)> {
    vec![
        ("T*P1", FlagData::new(vec![1], 2).expect("flag")),
        ("T*Gr(2,4)", FlagData::new(vec![2], 4).expect("flag")),
        ("T*Fl(1,2;3)", FlagData::new(vec![1, 2], 3).expect("flag")),
    ]
}

/// Seeded random XXZ point with `n` states on `w` sites.
pub fn xxz_point(n: usize, w: usize) -> ParamPoint {
    random_params(n, w, 2024).expect("random point")
}
