use fermi_eos_core::exponents::{build_program, optimize, q, sigma_affine, Q};
use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

fn rat(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn optimum_dominates_random_probes() {
    for dim in 1..=3u8 {
        for alpha in [q(0, 1), q(1, 100)] {
            let prog = build_program(dim, alpha).unwrap();
            let opt = optimize(&prog).unwrap();
            assert!(opt.active.len() >= 2, "D = {dim}: {:?}", opt.active);
            assert_eq!(prog.objective(&opt.s, &opt.t), opt.sigma);
            let mut runner = TestRunner::new(Config { cases: 1000, ..Config::default() });
            runner
                .run(&((0i64..=1000, 1i64..=1000), (0i64..=1000, 1i64..=1000)), |((sn, sd), (tn, td))| {
                    let (s, t) = (rat(sn.min(sd), sd), rat(tn.min(td), td));
                    prop_assert!(prog.objective(&s, &t) <= opt.sigma);
                    Ok(())
                })
                .unwrap();
        }
    }
}

#[test]
fn three_dimensional_program_matches_list() {
    for alpha in [q(0, 1), q(1, 10), q(1, 3)] {
        let prog = build_program(3, alpha.clone()).unwrap();
        let a = &alpha;
        // (s, t, constant) of 16t-28α, 2+6s-20t, 2-6s, 14s-20t-7α, 2s-7α
        let expected = [
            (q(0, 1), q(16, 1), -rat(28, 1) * a),
            (q(6, 1), q(-20, 1), q(2, 1)),
            (q(-6, 1), q(0, 1), q(2, 1)),
            (q(14, 1), q(-20, 1), -rat(7, 1) * a),
            (q(2, 1), q(0, 1), -rat(7, 1) * a),
        ];
        assert_eq!(prog.scale, q(1, 8));
        // same forms, in the general-D order
        assert_eq!(prog.forms.len(), expected.len());
        for (cs, ct, c) in &expected {
            let hit = prog.forms.iter().any(|f| &f.coeff_s == cs && &f.coeff_t == ct && &f.offset.at(&alpha) == c);
            assert!(hit, "missing form {cs} s + {ct} t + {c}");
        }
    }
}

#[test]
fn sigma_slopes() {
    let zero = q(0, 1);
    let h = q(1, 1000);
    assert_eq!(sigma_affine(3, &zero, &h).unwrap().slope, q(-21, 32));
    assert_eq!(sigma_affine(1, &zero, &h).unwrap().slope, q(-30, 44));
    assert_eq!(sigma_affine(2, &zero, &h).unwrap().slope, q(-3, 8));
    assert_eq!(sigma_affine(2, &zero, &h).unwrap().at(&q(1, 8)), q(1, 8) - q(3, 64));
}
