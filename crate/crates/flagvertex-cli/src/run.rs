//! Command dispatch and output.

use std::io::Write;
use std::path::Path;

use flagvertex::bethe::{closed_form_check, solution_json, solve, spectral_crosscheck, BetheProblem, ClosedFormReading};
use flagvertex::kernel::{int, rat};
use flagvertex::quiver::enumerate_fixed_points;
use flagvertex::trs::{check_eigen, lemma_suite, LEMMA_CASES, LITERAL_LEMMA_CASES};
use flagvertex::vertex::{calibrate_convention, toda_limit, vertex_series};
use flagvertex::xxz::{identity_suite, qkz_trs_sum_check, random_params, IDENTITY_NAMES};
use flagvertex::{Error, FixedPointChain, FlagData, Insertion, ParamPoint, Report, SeriesConvention, Q, VERSION};
use serde_json::json;

use crate::config::{bethe_params, param_point, resolve, BetheParams, Cli, CliError, Command, Resolved, Suite};

const DEFAULT_DIGITS: u32 = 50;
const LEMMA_SAMPLES: usize = 5;

fn default_a() -> Vec<Q> {
    vec![int(2), int(3), int(5), int(7), int(11), int(13)]
}

/// `q^{1/2} = 1/2`, `ℏ^{1/2} = 1/3`, `a = (2, 3, 5, ...)`.
fn default_point(w: usize, zeta: Vec<Q>, guard: u32) -> Result<ParamPoint, CliError> {
    if w > default_a().len() {
        return Err(CliError::config(format!("no default parameters for w = {w}; pass --params")));
    }
    Ok(ParamPoint::new(rat(1, 2), rat(1, 3), default_a()[..w].to_vec(), zeta, guard)?)
}

/// Raise the guard window to cover `order` and revalidate.
fn with_guard(mut p: ParamPoint, order: &[i64]) -> Result<ParamPoint, CliError> {
    let max = order.iter().copied().max().unwrap_or(0).max(0) as usize;
    p.guard_window = p.guard_window.max(ParamPoint::default_guard(max, p.w()));
    p.validate()?;
    Ok(p)
}

fn expand_order(order: Option<&Vec<i64>>, levels: usize, default: i64) -> Result<Vec<i64>, CliError> {
    match order {
        None => Ok(vec![default; levels]),
        Some(o) if o.len() == 1 => Ok(vec![o[0]; levels]),
        Some(o) if o.len() == levels => Ok(o.clone()),
        Some(o) => Err(CliError::config(format!("--order has {} entries, expected 1 or {levels}", o.len()))),
    }
}

fn selected_points(flag: &FlagData, point: Option<usize>) -> Result<Vec<FixedPointChain>, CliError> {
    let all = enumerate_fixed_points(flag);
    match point {
        None => Ok(all),
        Some(i) if i < all.len() => Ok(vec![all[i].clone()]),
        Some(i) => Err(CliError::config(format!("--point {i} out of range (there are {} fixed points)", all.len()))),
    }
}

/// All ways to distribute `w` sites over `n` states.
fn compositions(w: usize, n: usize) -> Vec<Vec<usize>> {
    if n == 1 {
        return vec![vec![w]];
    }
    (0..=w)
        .rev()
        .flat_map(|first| {
            compositions(w - first, n - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes()).and_then(|_| so.flush()).map_err(|e| CliError::config(format!("stdout: {e}")))
        }
        Some(path) => {
            let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
            let io = |e: std::io::Error| CliError::config(format!("writing {}: {e}", path.display()));
            let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
            tmp.write_all(text.as_bytes()).map_err(io)?;
            tmp.as_file().sync_all().map_err(io)?;
            tmp.persist(path).map_err(|e| io(e.error))?;
            Ok(())
        }
    }
}

/// Run the command line; returns the exit code on success paths.
pub fn execute(cli: &Cli) -> Result<u8, CliError> {
    let r = resolve(cli)?;
    let hash = r.config.hash();
    match &cli.command {
        Command::Vertex | Command::TodaLimit | Command::BetheSolve => {
            let results = compute(&r)?;
            let doc = json!({
                "command": r.config.command,
                "config_hash": hash,
                "seed": r.config.seed,
                "version": VERSION,
                "results": results,
            });
            let text = serde_json::to_string_pretty(&doc).expect("json serializes") + "\n";
            write_output(r.out.as_deref(), &text)?;
            Ok(0)
        }
        Command::Check { suite } => {
            let mut rep = check(*suite, &r)?;
            rep.seed = r.config.seed;
            rep.config_hash = Some(hash);
            write_output(r.out.as_deref(), &(rep.to_json() + "\n"))?;
            Ok(if rep.passed() { 0 } else { 1 })
        }
    }
}

fn quiver_or_default(r: &Resolved) -> Result<FlagData, CliError> {
    match &r.config.quiver {
        Some(f) => Ok(f.clone()),
        None => Ok(FlagData::new(vec![1], 2)?),
    }
}

fn series_params(r: &Resolved, flag: &FlagData, order: &[i64]) -> Result<ParamPoint, CliError> {
    let p = match &r.params_text {
        Some(t) => param_point(t)?,
        None => default_point(flag.w, vec![], 0)?,
    };
    if p.w() != flag.w {
        return Err(CliError::config(format!("params have {} framing parameters, quiver has w = {}", p.w(), flag.w)));
    }
    with_guard(p, order)
}

fn compute(r: &Resolved) -> Result<serde_json::Value, CliError> {
    let c = &r.config;
    match c.command {
        Command::Vertex | Command::TodaLimit => {
            let flag = quiver_or_default(r)?;
            let order = expand_order(c.order.as_ref(), flag.v.len(), 3)?;
            let params = series_params(r, &flag, &order)?;
            let mut out = Vec::new();
            for p in selected_points(&flag, c.point)? {
                let s = if matches!(c.command, Command::Vertex) {
                    let conv: SeriesConvention = c.convention.map(Into::into).unwrap_or(SeriesConvention::Zh);
                    vertex_series(&p, &Insertion::one(), &order, &params, conv)?
                } else {
                    if c.convention == Some(crate::config::ConventionArg::Z) {
                        flagvertex::vertex::toda_limit_z(&p, &order, &params)?;
                    }
                    toda_limit(&p, &order, &params)?
                };
                out.push(json!({"point": p.to_one_based(), "series": s.to_json()}));
            }
            Ok(json!({"quiver": flag, "params": params, "points": out}))
        }
        Command::BetheSolve => {
            let digits = c.precision.unwrap_or(DEFAULT_DIGITS);
            let mut blocks = Vec::new();
            for p in bethe_problems(r, digits)? {
                let sols = solve(&p, digits, c.seed)?;
                let table: Vec<serde_json::Value> =
                    sols.iter().map(|s| solution_json(&p, s, digits)).collect::<Result<_, Error>>()?;
                blocks.push(json!({
                    "weight": p.weight,
                    "block_dim": p.block_dim(),
                    "found": sols.len(),
                    "solutions": table,
                }));
            }
            Ok(json!({"digits": digits, "blocks": blocks}))
        }
        Command::Check { .. } => unreachable!("checks are dispatched separately"),
    }
}

fn bethe_problems(r: &Resolved, digits: u32) -> Result<Vec<BetheProblem>, CliError> {
    let c = &r.config;
    let bp = match &r.params_text {
        Some(t) => bethe_params(t)?,
        None => {
            let w = c.w.unwrap_or(2);
            let n = c.n.unwrap_or(2);
            let a = [int(2), rat(-3, 2), rat(5, 3), rat(7, 5), rat(-11, 4)];
            let z = [int(1), rat(5, 2), rat(-7, 3), rat(11, 5)];
            if w > a.len() || n > z.len() || w == 0 || n < 2 {
                return Err(CliError::config("default Bethe parameters need 1 <= w <= 5 and 2 <= n <= 4; pass --params"));
            }
            BetheParams::Hbar {
                hbar: rat(9, 4),
                a: a[..w].to_vec(),
                zeta: z[..n].to_vec(),
            }
        }
    };
    let (w, n) = match &bp {
        BetheParams::Point(p) => (p.a.len(), p.zeta.len()),
        BetheParams::Hbar { a, zeta, .. } => (a.len(), zeta.len()),
    };
    if c.w.is_some_and(|x| x != w) || c.n.is_some_and(|x| x != n) {
        return Err(CliError::config(format!("--n/--w disagree with params (n = {n}, w = {w})")));
    }
    let weights = match &c.weight {
        Some(wt) => {
            if wt.len() != n || wt.iter().sum::<usize>() != w {
                return Err(CliError::config(format!("--weight must have {n} entries summing to {w}")));
            }
            vec![wt.clone()]
        }
        None => compositions(w, n),
    };
    weights
        .into_iter()
        .map(|wt| {
            Ok(match &bp {
                BetheParams::Point(p) => BetheProblem::from_params(p, wt)?,
                BetheParams::Hbar { hbar, a, zeta } => BetheProblem::with_hbar(hbar.clone(), a.clone(), zeta.clone(), wt, digits)?,
            })
        })
        .collect()
}

/// Combine sub-reports under one name; a single sub-report is returned as is.
fn combine(name: &str, seed: u64, reps: Vec<Report>) -> Report {
    if reps.len() == 1 {
        return reps.into_iter().next().expect("one report");
    }
    let mut top = Report::new(name, seed);
    for s in &reps {
        top.absorb(s);
    }
    top
}

fn check(suite: Suite, r: &Resolved) -> Result<Report, CliError> {
    let c = &r.config;
    let seed = c.seed;
    match suite {
        Suite::TrsEigen => {
            let flag = quiver_or_default(r)?;
            let order = expand_order(c.order.as_ref(), flag.v.len(), 3)?;
            let params = series_params(r, &flag, &order)?;
            let rs: Vec<usize> = match c.r {
                Some(x) if (1..=flag.w).contains(&x) => vec![x],
                Some(x) => return Err(CliError::config(format!("--r {x} outside 1..={}", flag.w))),
                None => (1..=flag.w).collect(),
            };
            let mut reps = Vec::new();
            for p in selected_points(&flag, c.point)? {
                for &k in &rs {
                    let mut rep = check_eigen(&flag, &p, k, &order, &params)?;
                    rep.check = format!("trs-eigen[p={:?},r={k}]", p.to_one_based());
                    reps.push(rep);
                }
            }
            Ok(combine("trs-eigen", seed, reps))
        }
        Suite::Xxz => {
            let name = c.identity.as_deref().unwrap_or("all");
            if !IDENTITY_NAMES.contains(&name) {
                return Err(CliError::config(format!("unknown identity {name}; expected one of {}", IDENTITY_NAMES.join(", "))));
            }
            let (n, params) = match &r.params_text {
                Some(t) => {
                    let p = param_point(t)?;
                    let n = c.n.unwrap_or(p.zeta.len());
                    if c.w.is_some_and(|w| w != p.w()) {
                        return Err(CliError::config("--w disagrees with params"));
                    }
                    (n, p)
                }
                None => {
                    let n = c.n.unwrap_or(2);
                    let w = c.w.unwrap_or(2);
                    (n, random_params(n, w, seed)?)
                }
            };
            Ok(identity_suite(name, n, &params, seed)?)
        }
        Suite::QkzTrsSum => {
            let order = match c.order.as_deref() {
                None => 8,
                Some([d]) => *d,
                Some(_) => return Err(CliError::config("qkz-trs-sum takes a single --order")),
            };
            let params = match &r.params_text {
                Some(t) => param_point(t)?,
                None => default_point(2, vec![int(1), int(5)], 0)?,
            };
            let params = with_guard(params, &[order])?;
            Ok(qkz_trs_sum_check(&params, order, c.insertions.as_ref(), seed)?)
        }
        Suite::Lemma => {
            let params = match &r.params_text {
                Some(t) => param_point(t)?,
                None => default_point(3, vec![], 4)?,
            };
            let cases: Vec<&str> = match c.identity.as_deref() {
                None => LEMMA_CASES.to_vec(),
                Some(x) if LEMMA_CASES.contains(&x) || LITERAL_LEMMA_CASES.contains(&x) => vec![x],
                Some(x) => return Err(CliError::config(format!("unknown lemma case {x}; expected one of {}", LEMMA_CASES.join(", ")))),
            };
            let reps = cases
                .into_iter()
                .map(|k| lemma_suite(k, &params, LEMMA_SAMPLES, seed))
                .collect::<Result<Vec<_>, Error>>()?;
            Ok(combine("lemma", seed, reps))
        }
        Suite::Calibrate => {
            let params = match &r.params_text {
                Some(t) => param_point(t)?,
                None => default_point(2, vec![], 8)?,
            };
            let mut rep = Report::new("calibrate", seed);
            match calibrate_convention(&params) {
                Ok(cv) => rep.note(format!("sigma_pref = {}, sigma_int = {}", cv.sigma_pref, cv.sigma_int)),
                Err(Error::Calibration(m)) => rep.fail(m),
                Err(e) => return Err(e.into()),
            }
            Ok(rep)
        }
        Suite::Bethe => {
            let digits = c.precision.unwrap_or(DEFAULT_DIGITS);
            match c.identity.as_deref() {
                Some("closed-form") => return Ok(closed_form_check(ClosedFormReading::Derived, digits, seed)?),
                Some("closed-form-literal") => return Ok(closed_form_check(ClosedFormReading::Literal, digits, seed)?),
                Some(x) if x != "crosscheck" => {
                    return Err(CliError::config(format!("unknown bethe check {x}; expected crosscheck, closed-form or closed-form-literal")))
                }
                _ => {}
            }
            let reps = bethe_problems(r, digits)?
                .iter()
                .map(|p| spectral_crosscheck(p, digits, seed))
                .collect::<Result<Vec<_>, Error>>()?;
            Ok(combine("bethe-crosscheck", seed, reps))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compositions_cover_all_weights() {
        assert_eq!(compositions(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(compositions(3, 3).len(), 10);
    }

    #[test]
    fn order_broadcast() {
        assert_eq!(expand_order(Some(&vec![4]), 2, 3).unwrap(), vec![4, 4]);
        assert_eq!(expand_order(None, 1, 3).unwrap(), vec![3]);
        assert_eq!(expand_order(Some(&vec![1, 2, 3]), 2, 3).unwrap_err().code, 2);
    }
}
