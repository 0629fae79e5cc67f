//! Property-based invariants over randomized states and paths.

use proptest::prelude::*;

use roegen_core::eos::{self, EosParams};
use roegen_core::equilibrium::{build_diagram, GridSpec, PhaseDiagram, SolidModel, Tolerances};
use roegen_core::fields::{field_work, FieldPath, Vec3};
use roegen_core::model::{classify_phase, PointClass};
use roegen_core::potentials::PotentialModel;

fn shared_diagram() -> &'static PhaseDiagram {
    use std::sync::OnceLock;
    static DIAGRAM: OnceLock<PhaseDiagram> = OnceLock::new();
    DIAGRAM.get_or_init(|| {
        build_diagram(
            &EosParams::reduced(),
            &SolidModel::default(),
            &GridSpec {
                n_increase_decrease: 48,
                n_boom_crisis: 48,
                n_recovery_recession: 48,
                ..GridSpec::default()
            },
            &Tolerances::default(),
        )
        .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// Closed-form derivatives match central finite differences in the
    /// stable domain.
    #[test]
    fn derivatives_match_finite_differences(
        i in 0.5f64..1.5,
        q in 1.5f64..6.0,
    ) {
        let params = EosParams::reduced();
        let h = 1e-6;
        let (dq, _, di) = eos::price_level_derivatives(&params, i, q).unwrap();
        let p = |ii: f64, qq: f64| eos::price_level(&params, ii, qq).unwrap();
        let fd_q = (p(i, q + h) - p(i, q - h)) / (2.0 * h);
        let fd_i = (p(i + h, q) - p(i - h, q)) / (2.0 * h);
        prop_assert!((dq - fd_q).abs() <= 1e-6 * dq.abs().max(1.0));
        prop_assert!((di - fd_i).abs() <= 1e-6 * di.abs().max(1.0));
    }

    /// Every root returned by solve_volume satisfies the residual bound.
    #[test]
    fn volume_roots_satisfy_residual_bound(
        i in 0.5f64..1.4,
        p in 0.05f64..2.0,
    ) {
        let params = EosParams::reduced();
        let roots = eos::solve_volume(&params, i, p).unwrap();
        prop_assert!(!roots.is_empty());
        prop_assert!(roots.len() <= 3);
        for &q in &roots {
            let residual = (eos::price_level(&params, i, q).unwrap() - p).abs();
            prop_assert!(residual <= 1e-12 * p.max(1.0), "residual {residual} at I={i}, P={p}");
        }
        for w in roots.windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
    }

    /// The Van der Waals model approaches the ideal one as a, b -> 0.
    #[test]
    fn ideal_limit_of_van_der_waals(
        i in 0.2f64..3.0,
        q in 0.3f64..10.0,
    ) {
        let vdw = EosParams { a: 1e-8, b: 1e-8, ..EosParams::ideal(1.0, 1.5).unwrap() };
        let vdw = EosParams { kind: roegen_core::EosKind::VanDerWaals, ..vdw };
        let ideal = EosParams::ideal(1.0, 1.5).unwrap();
        let pv = eos::price_level(&vdw, i, q).unwrap();
        let pi = eos::price_level(&ideal, i, q).unwrap();
        prop_assert!((pv - pi).abs() <= 1e-6 * pi.abs().max(1.0));
    }

    /// Two points on the same side of every boundary get the same label.
    #[test]
    fn classification_is_piecewise_constant(
        i in 0.62f64..0.98,
        f1 in 0.05f64..0.95,
        f2 in 0.05f64..0.95,
    ) {
        let d = shared_diagram();
        let sat = d.saturation_price(i).unwrap();
        // two distinct prices strictly inside the income band below saturation
        let p1 = sat * f1 * 0.9;
        let p2 = sat * f2 * 0.9;
        let c1 = classify_phase(d, i, p1).unwrap();
        let c2 = classify_phase(d, i, p2).unwrap();
        prop_assert_eq!(c1, c2);
        // and two prices strictly inside the liquidity band agree too
        let melt = d.melting_price(i);
        if melt > sat * 1.2 {
            let l1 = sat + (melt - sat) * (0.1 + 0.8 * f1);
            let l2 = sat + (melt - sat) * (0.1 + 0.8 * f2);
            let c1 = classify_phase(d, i, l1).unwrap();
            let c2 = classify_phase(d, i, l2).unwrap();
            prop_assert_eq!(c1, c2);
        }
    }

    /// Field work scales quadratically and is additive over concatenation.
    #[test]
    fn field_work_quadratic_scaling(
        ex in -2.0f64..2.0,
        ey in -2.0f64..2.0,
        hz in -2.0f64..2.0,
        chi_e in 0.0f64..3.0,
        chi_m in 0.0f64..3.0,
        lambda in 0.5f64..2.0,
    ) {
        let base: Vec<(Vec3, Vec3)> = vec![
            ([0.0; 3], [0.0; 3]),
            ([ex * 0.3, ey, 0.1], [0.0, 0.2, hz]),
            ([ex, ey * 0.5, -0.2], [0.3, 0.0, hz * 0.7]),
        ];
        let scaled: Vec<(Vec3, Vec3)> = base
            .iter()
            .map(|(e, h)| {
                (
                    [e[0] * lambda, e[1] * lambda, e[2] * lambda],
                    [h[0] * lambda, h[1] * lambda, h[2] * lambda],
                )
            })
            .collect();
        let w1 = field_work(&FieldPath::new(base).unwrap(), chi_e, chi_m).unwrap();
        let w2 = field_work(&FieldPath::new(scaled).unwrap(), chi_e, chi_m).unwrap();
        prop_assert!((w2 - lambda * lambda * w1).abs() <= 1e-9 * w1.abs().max(1.0));
    }

    /// Exchange potential equals its definition everywhere in the domain.
    #[test]
    fn exchange_potential_definition(
        i in 0.4f64..1.5,
        q in 0.5f64..8.0,
    ) {
        let m = PotentialModel::new(EosParams::reduced());
        let gamma = m.exchange_potential(i, q).unwrap();
        let manual = m.growth_energy(i, q).unwrap() - i * m.entropy(i, q).unwrap()
            + eos::price_level(&m.eos, i, q).unwrap() * q;
        prop_assert_eq!(gamma, manual);
    }

    /// classify_phase never panics and is total over the diagram range.
    #[test]
    fn classification_is_total(
        i in 0.3f64..1.2,
        p in 0.0f64..12.0,
    ) {
        let d = shared_diagram();
        let class = classify_phase(d, i, p).unwrap();
        match class {
            PointClass::Phase(_) | PointClass::Boundary(_) => {}
        }
    }
}
