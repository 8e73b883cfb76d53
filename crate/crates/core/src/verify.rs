//! Named verification suites over a computed dual.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::json;

use crate::cohft::{self, FrobeniusData, GwSetup, GwTolerance, OmegaCounter};
use crate::error::{Error, Result};
use crate::mackey::DualData;
use crate::morita::{CenterIso, OrbitMorita};
use crate::report::Check;
use crate::reps::irreducible_representations;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Cocycle,
    Chi,
    Morita,
    CenterIso,
    Trace,
    Orthogonality,
    Counting,
    Cutting,
    Gw,
    All,
}

impl Suite {
    pub const EACH: [Suite; 9] = [
        Suite::Cocycle,
        Suite::Chi,
        Suite::Morita,
        Suite::CenterIso,
        Suite::Trace,
        Suite::Orthogonality,
        Suite::Counting,
        Suite::Cutting,
        Suite::Gw,
    ];
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "cocycle" => Suite::Cocycle,
            "chi" => Suite::Chi,
            "morita" => Suite::Morita,
            "center-iso" => Suite::CenterIso,
            "trace" => Suite::Trace,
            "orthogonality" => Suite::Orthogonality,
            "counting" => Suite::Counting,
            "cutting" => Suite::Cutting,
            "gw" => Suite::Gw,
            "all" => Suite::All,
            other => return Err(Error::InvalidInput(format!("unknown suite {other:?}"))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("serializable");
        f.write_str(s.as_str().expect("unit variant"))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub tol: f64,
    pub samples: usize,
    pub seed: u64,
    pub brute_cap: u128,
    pub max_genus: usize,
    pub max_n: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            samples: crate::morita::DEFAULT_SAMPLES,
            seed: 0,
            brute_cap: cohft::DEFAULT_BRUTE_CAP,
            max_genus: 2,
            max_n: 4,
        }
    }
}

/// Runs one suite (or all of them) and returns its checks.
pub fn run_suite(dual: &DualData, suite: Suite, opts: &VerifyOptions) -> Result<Vec<Check>> {
    if suite == Suite::All {
        let mut out = Vec::new();
        for s in Suite::EACH {
            out.extend(run_suite(dual, s, opts)?);
        }
        return Ok(out);
    }
    let tag = |checks: Vec<Check>| -> Vec<Check> {
        checks
            .into_iter()
            .map(|mut c| {
                c.name = format!("{suite}: {}", c.name);
                c
            })
            .collect()
    };
    Ok(tag(match suite {
        Suite::Cocycle => cocycle(dual, opts),
        Suite::Chi => chi(dual, opts),
        Suite::Morita => morita(dual, opts)?,
        Suite::CenterIso => {
            let ci = CenterIso::new(dual, opts.tol)?;
            let mut v = ci.isomorphism_checks();
            v.extend(ci.conjugacy_block_check());
            v.push(ci.orbit_map_check());
            v
        }
        Suite::Trace => vec![CenterIso::new(dual, opts.tol)?.trace_pullback_check()],
        Suite::Orthogonality => vec![cohft::orthogonality_check(dual, 1e-8)],
        Suite::Counting => counting(dual, opts)?,
        Suite::Cutting => cutting(dual, opts)?,
        Suite::Gw => gw(dual, opts)?,
        Suite::All => unreachable!(),
    }))
}

fn cocycle(dual: &DualData, opts: &VerifyOptions) -> Vec<Check> {
    let ext = &dual.ext;
    let tau = match ext.tau_cocycle_violation() {
        None => Check::boolean("tau satisfies the twisted cocycle identity (exact)", true),
        Some((a, b, c)) => Check::boolean("tau satisfies the twisted cocycle identity (exact)", false)
            .with_details(json!({ "witness": [a, b, c] })),
    };
    let m = dual.q().order();
    let mut norm: f64 = 0.0;
    for rho in 0..dual.num_irreps() {
        for a in 0..m {
            norm = norm
                .max((dual.c(rho, 0, a) - 1.0).norm())
                .max((dual.c(rho, a, 0) - 1.0).norm());
        }
    }
    vec![
        tau,
        Check::residual(
            "c is a normalized groupoid 2-cocycle",
            dual.cocycle_residual(),
            opts.tol,
        ),
        Check::residual("c(1,q) = c(q,1) = 1", norm, opts.tol),
    ]
}

fn chi(dual: &DualData, opts: &VerifyOptions) -> Vec<Check> {
    let a = dual.crossed_product();
    let n = dual.ext.h.order();
    let rank = a.image_rank();
    vec![
        Check::residual("chi o alpha is multiplicative", a.multiplicativity_residual(), opts.tol)
            .with_details(json!({ "pairs": n * n })),
        Check::boolean("chi o alpha is bijective", rank == n && a.dim() == n)
            .with_details(json!({ "rank": rank, "order_of_H": n })),
    ]
}

fn morita(dual: &DualData, opts: &VerifyOptions) -> Result<Vec<Check>> {
    let bm = crate::morita::Bimodules::new(dual);
    let mut v = bm.check(opts.samples, opts.seed, opts.tol);
    for s in dual.stabilizers()? {
        v.extend(OrbitMorita::new(dual, &s).check(opts.samples, opts.seed, opts.tol));
    }
    Ok(v)
}

fn counting(dual: &DualData, opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut v = cohft::counting_checks(dual, 1e-8);
    for s in dual.stabilizers()? {
        let r = cohft::c_regular_classes(&s, opts.tol);
        v.push(
            Check::boolean(
                format!("orbit {}: c-regular classes span the twisted center", s.orbit),
                r.regular_count == r.center_dim,
            )
            .with_details(serde_json::to_value(&r).expect("serializable")),
        );
    }
    Ok(v)
}

fn cutting(dual: &DualData, opts: &VerifyOptions) -> Result<Vec<Check>> {
    let tol = 1e-8;
    let h = &dual.ext.h;
    let mut v = cohft::cutting_axiom_check(
        &FrobeniusData::group_center(h)?,
        "Z(C[H])",
        opts.max_genus,
        opts.max_n,
        tol,
    );
    let mut counter = OmegaCounter::new(h, opts.brute_cap);
    v.extend(cohft::cutting_axiom_check_exact(
        &mut counter,
        opts.max_genus,
        opts.max_n,
    )?);
    for s in dual.stabilizers()? {
        let fd = FrobeniusData::stabilizer_center(&s)?;
        v.push(Check::residual(
            format!("orbit {}: tr(e_q e_q^-1) = 1/|C(q)|", s.orbit),
            fd.normalization_residual(),
            tol,
        ));
        v.extend(cohft::cutting_axiom_check(
            &fd,
            &format!("orbit {} twisted", s.orbit),
            opts.max_genus,
            opts.max_n,
            tol,
        ));
    }
    Ok(v)
}

fn gw(dual: &DualData, opts: &VerifyOptions) -> Result<Vec<Check>> {
    let h = &dual.ext.h;
    let irreps_h = irreducible_representations(h, opts.seed)?;
    let (_, oracle) = cohft::oracle_agreement(h, &irreps_h, opts.brute_cap, opts.max_genus, opts.max_n, 1e-6)?;
    let ci = CenterIso::new(dual, opts.tol)?;
    let setup = GwSetup::new(&ci)?;
    let group = &setup.group;
    let mut v = vec![
        oracle,
        Check::residual(
            "handle element of Z(C[H]) is central",
            group.handle_central_residual(),
            opts.tol,
        )
        .with_details(json!({ "condition": group.condition })),
    ];
    v.extend(cohft::gw_decomposition_check(
        &setup,
        opts.max_genus,
        opts.max_n,
        GwTolerance::default(),
    )?);
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::catalog_entry;
    use crate::mackey::DualOptions;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::EACH.into_iter().chain([Suite::All]) {
            assert_eq!(s.to_string().parse::<Suite>().unwrap(), s);
        }
    }

    #[test]
    fn s3_all_passes_and_perturbation_fails_cocycle() {
        let e = catalog_entry("s3_split").unwrap().extension;
        let mut d = DualData::compute(&e, DualOptions::default()).unwrap();
        let opts = VerifyOptions {
            samples: 10,
            ..Default::default()
        };
        for c in run_suite(&d, Suite::All, &opts).unwrap() {
            assert!(c.pass, "{} {:e}", c.name, c.max_residual);
        }
        d.perturb_cocycle(1e-3);
        let checks = run_suite(&d, Suite::Cocycle, &opts).unwrap();
        assert!(checks.iter().any(|c| !c.pass));
        assert!(checks.iter().all(|c| c.name.starts_with("cocycle: ")));
    }
}
