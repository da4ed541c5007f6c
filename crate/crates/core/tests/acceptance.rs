//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Time limits are part of each criterion.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::{BigUint, RandBigInt};
use num_traits::One;
use polycollatz::analysis::{census, drift_report, table2, table3, ResidueClass};
use polycollatz::cli;
use polycollatz::collatz::{
    check_corollary1, collatz_step, degree_estimate, family_g, family_mersenne, family_u,
    fixed_point_check, g_relations_check, h_chain_check, mersenne_prefix_check, trajectory, u_of,
    TrajectoryLimits,
};
use polycollatz::treegraph::{build_tree, graph_invariants, to_dot, DotOptions, TreeLimits};
use polycollatz::verify::{
    checkpoint_resume, checkpoint_save, verify_partial, verify_range, VerifyPolicy,
};
use polycollatz::BitPoly;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn n(v: u64) -> BitPoly {
    BitPoly::from_u64(v)
}

const TABLE1: [(u64, &str); 11] = [
    (0, "1"),
    (1, "x+1"),
    (3, "x^3+1"),
    (4, "x^4+x^3+x+1"),
    (6, "x^6+x^4+1"),
    (7, "x^7+ x^6+ x^5 + x^4+ x +1"),
    (9, "x^9+ x^7+ x^6 +  x^4  +x^3+  1"),
    (11, "x^11+ x^7 + x^3  +x   +  1"),
    (12, "x^12  + x^11 + x^8 + x^7 + x^5  +1"),
    (14, "x^14+ x^11 +x^10 +x^7 +  x^6 +x^5 +   x + 1"),
    (15, "x^15+  x^14 +x^13 +  x^10 +x^9 +  x^7 +x^5 +  x^3 +1"),
];

/// Even p from 2 to 32: (degree column, polynomial, printed mean ratio).
const TABLE2: [(u64, &str, &str); 16] = [
    (4, "1 + x^4", "3"),
    (7, "1 + x^5 + x^7", "2.172"),
    (10, "1 + x^4 + x^5 + x^7 + x^8 + x^10", "2.778"),
    (13, "1 + x^6 + x^8 + x^9 + x^12 + x^13", "2.357"),
    (16, "1 + x^4 + x^6 + x^8 + x^10 + x^11 + x^14 + x^15 + x^16", "1.957"),
    (20, "1 + x^5 + x^6 + x^7 + x^8 + x^9 + x^10 + x^12 + x^13 + x^20", "2.045"),
    (23, "1 + x^4 + x^5 + x^6 + x^7 + x^9 + x^10 + x^12 + x^13 + x^14 + x^15 + x^16 + x^20 + x^23", "3.033"),
    (26, "1 + x^7 + x^9 + x^10 + x^11 + x^13 + x^15 + x^16 + x^21 + x^24 + x^26", "1.968"),
    (29, "1 + x^4 + x^7 + x^9 + x^13 + x^16 + x^17 + x^18 + x^19 + x^21 + x^25 + x^26 + x^27 + x^29", "2.333"),
    (
        32,
        "1 + x^5 + x^8 + x^9 + x^10 + x^12 + x^13 + x^19 + x^21 + x^23 + x^24 + x^25 + x^26 + x^27 + x^28 + x^31 + x^32",
        "2.072",
    ),
    (
        35,
        "1 + x^4 + x^5 + x^12 + x^13 + x^14 + x^15 + x^16 + x^19 + x^21 + x^22 + x^23 + x^26 + x^27 + x^28 + x^31 \
         + x^33 + x^34 + x^35",
        "1.822",
    ),
    (
        39,
        "1 + x^6 + x^7 + x^8 + x^12 + x^13 + x^14 + x^16 + x^19 + x^20 + x^21 + x^26 + x^31 + x^32 + x^33 + x^39",
        "1.985",
    ),
    (
        42,
        "1 + x^4 + x^6 + x^7 + x^8 + x^9 + x^10 + x^11 + x^12 + x^13 + x^14 + x^15 + x^18 + x^25 + x^26 + x^29 \
         + x^31 + x^32 + x^33 + x^34 + x^35 + x^36 + x^39 + x^42",
        "1.955",
    ),
    (
        45,
        "1 + x^5 + x^6 + x^9 + x^10 + x^11 + x^12 + x^13 + x^14 + x^15 + x^18 + x^19 + x^21 + x^25 + x^26 + x^28 \
         + x^30 + x^31 + x^34 + x^35 + x^36 + x^39 + x^40 + x^43 + x^45",
        "2.040",
    ),
    (
        48,
        "1 + x^4 + x^5 + x^6 + x^8 + x^12 + x^13 + x^14 + x^15 + x^18 + x^20 + x^23 + x^24 + x^25 + x^26 + x^31 \
         + x^32 + x^33 + x^39 + x^41 + x^42 + x^44 + x^45 + x^46 + x^48",
        "2.048",
    ),
    (
        51,
        "1 + x^8 + x^10 + x^11 + x^12 + x^13 + x^14 + x^18 + x^19 + x^20 + x^21 + x^26 + x^30 + x^31 + x^32 + x^33 \
         + x^34 + x^35 + x^36 + x^39 + x^41 + x^43 + x^45 + x^48 + x^50 + x^51",
        "1.924",
    ),
];

/// r for even p = 0, 2, ..., 32.
const TABLE3: [u64; 17] = [2, 3, 2, 4, 2, 3, 2, 5, 2, 3, 2, 4, 2, 3, 2, 6, 2];

fn c1_table1() -> Check {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = [
        "polycollatz",
        "table",
        "--which",
        "1",
        "--max",
        "10",
        "--format",
        "csv",
    ];
    let code = cli::run(argv, &mut out, &mut err);
    ensure(code == 0, || {
        format!("exit {code}: {}", String::from_utf8_lossy(&err))
    })?;
    let text = String::from_utf8(out).map_err(|e| e.to_string())?;
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    let mut count = 0;
    for (q, rec) in rows.records().enumerate() {
        let rec = rec.map_err(|e| e.to_string())?;
        let (deg, poly) = TABLE1.get(q).ok_or("too many rows")?;
        let want = BitPoly::parse_poly(poly).map_err(|e| e.to_string())?;
        ensure(rec[0] == q.to_string(), || {
            format!("row {q}: q = {}", &rec[0])
        })?;
        ensure(rec[1] == deg.to_string(), || {
            format!("row {q}: degree {}", &rec[1])
        })?;
        ensure(rec[2] == want.format_poly(), || {
            format!("row {q}: {} vs {}", &rec[2], want.format_poly())
        })?;
        count += 1;
    }
    ensure(count == 11, || format!("{count} rows"))?;
    Ok("11 rows".into())
}

/// Σq/k from `start` down to 1 in native arithmetic, independent of the
/// library's trajectory code.
fn native_ratio(start: u128) -> (u64, u64) {
    let (mut v, mut q_sum, mut k) = (start, 0, 0);
    while v != 1 {
        let t = 3 * v + 1;
        let q = t.trailing_zeros();
        v = t >> q;
        q_sum += q as u64;
        k += 1;
    }
    (q_sum, k)
}

fn c2_table2() -> Check {
    let rows = table2(32).map_err(|e| e.to_string())?;
    ensure(rows.len() == TABLE2.len(), || {
        format!("{} rows", rows.len())
    })?;
    let mut agree = Vec::new();
    for (row, (deg, poly, printed)) in rows.iter().zip(TABLE2) {
        let p = row.p;
        let want = BitPoly::parse_poly(poly).map_err(|e| e.to_string())?;
        ensure(family_g(p) == want, || {
            format!("p = {p}: G = {} vs {}", family_g(p), want)
        })?;
        ensure(row.poly == want.format_poly(), || {
            format!("p = {p}: poly column")
        })?;
        ensure(row.degree == deg && u_of(p) + 1 == deg, || {
            format!("p = {p}: degree {}", row.degree)
        })?;
        let g = family_g(p).to_u128().ok_or("G does not fit")?;
        let (q_sum, k) = native_ratio(g);
        ensure(
            (row.mean_ratio.q_sum, row.mean_ratio.k) == (q_sum, k),
            || {
                format!(
                    "p = {p}: ratio {}/{} vs oracle {q_sum}/{k}",
                    row.mean_ratio.q_sum, row.mean_ratio.k
                )
            },
        )?;
        let ratio = q_sum as f64 / k as f64;
        if (ratio - printed.parse::<f64>().unwrap()).abs() < 5e-4 {
            agree.push(p);
        }
    }
    ensure(rows[0].mean_ratio.exact == "3", || {
        format!("p = 2 ratio {}", rows[0].mean_ratio.exact)
    })?;
    Ok(format!(
        "16 polynomials exact; printed ratio reproduced at p = {agree:?}"
    ))
}

fn c3_table3() -> Check {
    let rows = table3(32).map_err(|e| e.to_string())?;
    let got: Vec<u64> = rows.iter().map(|r| r.r).collect();
    ensure(got == TABLE3, || format!("r = {got:?}"))?;
    for p in (0..=128u64).step_by(2) {
        let g = g_relations_check(p).map_err(|e| e.to_string())?;
        ensure(g.ok && g.r == 1 + (p + 2).trailing_zeros() as u64, || {
            format!("p = {p}: {g:?}")
        })?;
    }
    Ok("17 rows; r = 1 + v2(p+2) for even p <= 128".into())
}

fn c4_mersenne() -> Check {
    for p in 1..=64 {
        ensure(mersenne_prefix_check(p).map_err(|e| e.to_string())?, || {
            format!("p = {p}")
        })?;
        let t = trajectory(
            &family_mersenne(p).map_err(|e| e.to_string())?,
            TrajectoryLimits::default(),
        )
        .map_err(|e| e.to_string())?;
        ensure(t.q_sequence()[..p as usize].iter().all(|&q| q == 1), || {
            format!("p = {p}: q sequence")
        })?;
    }
    Ok("p in [1, 64]".into())
}

fn c5_u_family() -> Check {
    for k in 0..=1000 {
        let (v, q) = collatz_step(&family_u(k)).map_err(|e| e.to_string())?;
        ensure(v.is_one() && q == 2 * k + 2, || {
            format!("k = {k}: ({v}, {q})")
        })?;
    }
    Ok("k <= 1000".into())
}

fn c6_corollary1() -> Check {
    let mut rng = StdRng::seed_from_u64(6);
    for i in 0..10_000 {
        let bits = rng.gen_range(1..=1024);
        let f = rng.gen_biguint(bits) | BigUint::one();
        let j = rng.gen_range(1..=8);
        let f: BitPoly = f
            .to_str_radix(10)
            .parse()
            .map_err(|e: polycollatz::Error| e.to_string())?;
        ensure(check_corollary1(&f, j).map_err(|e| e.to_string())?, || {
            format!("case {i}: F = {f}, j = {j}")
        })?;
    }
    Ok("10^4 liftings".into())
}

fn c7_h_chain() -> Check {
    let mut count = 0;
    for k in (2..=100u64).filter(|k| (2 * k) % 6 == 4) {
        ensure(h_chain_check(k).map_err(|e| e.to_string())?, || {
            format!("2k = {}", 2 * k)
        })?;
        count += 1;
    }
    Ok(format!("{count} indices 2k <= 200"))
}

fn c8_residues() -> Check {
    let r = census(&n(1), &BitPoly::pow2(22)).map_err(|e| e.to_string())?;
    ensure(r.total == 1 << 21, || format!("total {}", r.total))?;
    ensure(r.class_laws_hold(), || "class q-laws".into())?;
    for (c, q) in [
        (ResidueClass::C1, 2),
        (ResidueClass::C2, 1),
        (ResidueClass::C4, 1),
    ] {
        let s = r.class(c);
        ensure(s.min_q == Some(q) && s.max_q == Some(q), || {
            format!("{c:?}: {s:?}")
        })?;
    }
    ensure(r.class(ResidueClass::C3).min_q == Some(3), || {
        "C3 min q".into()
    })?;
    ensure((r.mean_q - 2.0).abs() <= 0.01 && r.mean_q >= 1.75, || {
        format!("mean q {}", r.mean_q)
    })?;
    Ok(format!("mean q {:.6}", r.mean_q))
}

fn c9_degree_band() -> Check {
    let (mut prefixes, mut above, mut below, mut onto_one) = (0u64, 0u64, 0u64, 0u64);
    let mut first_interior = None;
    for v in (1..1u64 << 16).step_by(2) {
        let t = trajectory(&n(v), TrajectoryLimits::default()).map_err(|e| e.to_string())?;
        let p = t.start_degree();
        let mut q_sum = 0;
        for (i, s) in t.steps.iter().enumerate() {
            let l = i as u64 + 1;
            q_sum += s.q;
            let est = degree_estimate(p, l, q_sum);
            let d = s.degree as i64;
            prefixes += 1;
            if d > est {
                above += 1;
                if s.value.is_one() {
                    onto_one += 1;
                } else {
                    first_interior.get_or_insert((v, l, d, est));
                }
            } else if d < est - 1 {
                below += 1;
            }
        }
    }
    ensure(above == 0 && below == 0, || {
        format!(
            "{above} of {prefixes} prefixes above the estimate ({onto_one} on the final step onto 1), \
             {below} below est-1; first interior (n, l, D, est) = {:?}",
            first_interior.unwrap_or_default()
        )
    })?;
    Ok(format!("{prefixes} prefixes"))
}

fn c10_fixed_points() -> Check {
    ensure(
        !fixed_point_check(&BitPoly::one()).map_err(|e| e.to_string())?,
        || "1 moved".into(),
    )?;
    for v in (3..1u64 << 20).step_by(2) {
        ensure(fixed_point_check(&n(v)).map_err(|e| e.to_string())?, || {
            format!("{v} is fixed")
        })?;
    }
    Ok("only 1 below 2^20".into())
}

fn c11_tree() -> Check {
    let mut nodes = 0;
    for d in 0..=10 {
        let g = build_tree(d, TreeLimits::default()).map_err(|e| e.to_string())?;
        let inv = graph_invariants(&g);
        ensure(inv.all_hold() && !g.is_truncated(), || {
            format!("d = {d}: {inv:?}")
        })?;
        ensure(
            g.edge(&BitPoly::one()).is_some_and(|e| e.to.is_one()),
            || "sink self-loop".into(),
        )?;
        let indeg = g.in_degrees();
        for v in g.nodes() {
            if v.div_rem_small(3).1 == 0 {
                ensure(indeg.get(v).copied().unwrap_or(0) == 0, || {
                    format!("{v} has a predecessor")
                })?;
            }
        }
        let dot = to_dot(&g, DotOptions::default());
        let (dn, de) = common::check_dot(&dot)?;
        ensure(dn == g.node_count() && de == g.edge_count(), || {
            format!("d = {d}: DOT counts")
        })?;
        let again = to_dot(
            &build_tree(d, TreeLimits::default()).map_err(|e| e.to_string())?,
            DotOptions::default(),
        );
        ensure(dot.as_bytes() == again.as_bytes(), || {
            format!("d = {d}: DOT not stable")
        })?;
        nodes = g.node_count();
    }
    Ok(format!("d <= 10, {nodes} nodes at d = 10"))
}

fn c12_verify() -> Check {
    let s = |e: polycollatz::Error| e.to_string();
    let policy = |w: usize| VerifyPolicy {
        workers: w,
        ..VerifyPolicy::default()
    };
    let (lo, hi) = (n(3), BitPoly::pow2(22));
    let main = verify_range(&lo, &hi, &policy(8)).map_err(s)?;
    ensure(main.verified && main.counterexamples.is_empty(), || {
        "not verified".into()
    })?;
    let reference = main.to_json().map_err(s)?;
    for w in [1, 4] {
        let other = verify_range(&lo, &hi, &policy(w))
            .map_err(s)?
            .to_json()
            .map_err(s)?;
        ensure(other == reference, || format!("{w} workers differ"))?;
    }

    let small = BitPoly::pow2(16);
    let early = verify_range(&lo, &small, &policy(4)).map_err(s)?;
    let full = verify_range(
        &lo,
        &small,
        &VerifyPolicy {
            early_exit: false,
            ..policy(4)
        },
    )
    .map_err(s)?;
    ensure(
        early.verified == full.verified && early.counterexamples == full.counterexamples,
        || "early exit disagrees".into(),
    )?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("sweep.jsonl");
    let part = verify_partial(&lo, &hi, &BitPoly::pow2(21), &policy(4)).map_err(s)?;
    checkpoint_save(&part, &path).map_err(s)?;
    let resumed = checkpoint_resume(&path, &policy(8)).map_err(s)?;
    ensure(resumed.to_json().map_err(s)? == reference, || {
        "resume differs".into()
    })?;
    let peak = main.records.max_odd_peak.as_ref().ok_or("no peak")?;
    Ok(format!(
        "[3, 2^22) verified, peak {} from {}",
        peak.value, peak.origin
    ))
}

fn c13_drift() -> Check {
    let (lo, hi) = (1u64 << 15, 1u64 << 16);
    let (mut slope_sum, mut net_sum, mut count) = (0.0, 0.0, 0u64);
    for v in (lo + 1..hi).step_by(2) {
        let t = trajectory(&n(v), TrajectoryLimits::default()).map_err(|e| e.to_string())?;
        let r = drift_report(&t, false);
        slope_sum += r.slope.ok_or("empty trajectory")?;
        net_sum += r.net_drift.ok_or("empty trajectory")?;
        count += 1;
    }
    let mean = slope_sum / count as f64;
    ensure(mean < 0.0 && (-0.5..=-0.3).contains(&mean), || {
        format!("mean slope {mean:.4}")
    })?;
    Ok(format!(
        "mean slope {mean:.4} over {count} starts (end-to-end drift {:.4})",
        net_sum / count as f64
    ))
}

type Criterion = (&'static str, u64, fn() -> Check);

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("table 1 golden", 1, c1_table1),
        ("table 2 golden", 1, c2_table2),
        ("table 3 golden and r law", 1, c3_table3),
        ("mersenne prefix", 1, c4_mersenne),
        ("U family single step", 1, c5_u_family),
        ("lifting identity", 10, c6_corollary1),
        ("H chain", 1, c7_h_chain),
        ("residue laws and census", 30, c8_residues),
        ("degree estimate band", 60, c9_degree_band),
        ("no other fixed point", 5, c10_fixed_points),
        ("tree invariants and DOT", 10, c11_tree),
        ("verification sweep", 60, c12_verify),
        ("average degree drift", 60, c13_drift),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = f();
        let elapsed = start.elapsed();
        let result = result.and_then(|msg| {
            if elapsed <= Duration::from_secs(*limit) {
                Ok(msg)
            } else {
                Err(format!("{msg}; took longer than {limit} s"))
            }
        });
        let (tag, msg) = match result {
            Ok(m) => ("PASS", m),
            Err(m) => {
                failed += 1;
                ("FAIL", m)
            }
        };
        println!(
            "criterion {:>2} {tag} {name} [{:.2?}]: {msg}",
            i + 1,
            elapsed
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
