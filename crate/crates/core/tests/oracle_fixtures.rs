//! Double-precision closed forms against high-precision reference values.

mod common;

use common::{read_table, rel, silver};
use sgwigner::closedform::{diag_kernel_centered, offdiag_coeffs};

#[test]
fn kernel_and_coefficients_match_reference() {
    let (header, rows) = read_table("precision_oracle.csv");
    assert_eq!(rows.len(), 200);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    let mut worst = [0.0f64; 10];
    for r in &rows {
        let scn = silver(r[col("gamma")]);
        let tau = r[col("tau")];
        for (k, tag) in ["1", "2", "3"].iter().enumerate() {
            let zp = r[col(&format!("z{tag}"))];
            let pp = r[col(&format!("p{tag}"))];
            let kern = diag_kernel_centered(zp, pp, tau, &scn).unwrap();
            worst[k] = worst[k].max(rel(kern.f, r[col(&format!("F{tag}"))]));
            if k == 0 {
                worst[3] = worst[3].max(rel(kern.g, r[col("G")]));
            }
        }
        let c = offdiag_coeffs(tau, &scn).unwrap();
        for (i, v) in [c.c1, c.c2, c.c3, c.c4, c.c5, c.c6].into_iter().enumerate() {
            let e = rel(v, r[col(&format!("C{}", i + 1))]);
            assert!(e < 1e-8, "C{} at gamma {} tau {tau}: {e:e}", i + 1, r[0]);
            worst[4 + i] = worst[4 + i].max(e);
        }
    }
    println!("worst relative errors F1 F2 F3 G C1..C6: {worst:?}");
    for w in worst {
        assert!(w < 1e-8);
    }
}

use sgwigner::coherence::{decoherence_time_auto, log_delta, DeltaMethod, DeltaOptions};

#[test]
fn log_delta_matches_independent_derivation() {
    let (_, rows) = read_table("delta_oracle.csv");
    assert_eq!(rows.len(), 30);
    let mut worst = 0.0f64;
    for r in &rows {
        let (g, t, expect) = (r[0], r[1], r[2]);
        let got = log_delta(t, &silver(g), DeltaOptions::default()).unwrap();
        // compare delta itself
        let e = (got - expect).abs();
        worst = worst.max(e);
        assert!(e < 1e-8, "gamma {g} t {t}: {got} vs {expect}");
    }
    println!("worst |ln delta error| = {worst:e}");
}

#[test]
fn decoherence_times_match_independent_derivation() {
    let (_, rows) = read_table("coherence_oracle.csv");
    for r in &rows {
        let td = decoherence_time_auto(&silver(r[0])).unwrap();
        let e = rel(td, r[1]);
        println!("gamma {:e}: t_d = {td:e} (reference {:e}, rel {e:.1e})", r[0], r[1]);
        assert!(e < 1e-8);
    }
}

#[test]
fn quadrature_delta_agrees_with_reference() {
    let (_, rows) = read_table("delta_oracle.csv");
    let opts = DeltaOptions {
        method: DeltaMethod::Quadrature,
        ..DeltaOptions::default()
    };
    for r in rows.iter().step_by(3) {
        let got = log_delta(r[1], &silver(r[0]), opts).unwrap();
        assert!((got - r[2]).abs() < 1e-8, "gamma {} t {}: {got} vs {}", r[0], r[1], r[2]);
    }
}
