//! Acceptance suite: one test per shipped claim, each printing a single
//! PASS/FAIL line (run with `--nocapture` to see them).
//!
//! The instance grid spans dimensions 1-16, every generator kind, and norm
//! scales straddling the 1/2 threshold; the pair suites span dimensions
//! 2-12 with commuting, nested, and Haar-random pairs.

use num_complex::Complex;

use cleanmat::{
    almost_star_clean, build_p0, clean_decompose, decompose_pair, difference_inverse, equivalent,
    generate, generate_projection, generate_projection_pair, hermitian_eig, invert_via_splitting,
    isometry_factor, left_projection_scaled, matrix, operator_norm, run_campaign, svd,
    verify_certificate, CampaignConfig, CertificateKind, Generator, Matrix64, PairStyle,
    Projection64, SplitMix64, ToleranceProfile64,
};

const DIMS: std::ops::RangeInclusive<usize> = 1..=16;
const SCALES: [f64; 6] = [0.1, 0.49, 0.5, 0.51, 1.0, 10.0];
const TRIALS: usize = 15;
const MASTER_SEED: u64 = 0xACCE_97;

fn c64(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

fn fro(a: &Matrix64, b: &Matrix64) -> f64 {
    (a - b).frobenius_norm()
}

fn conclude(tag: &str, description: &str, pass: bool, detail: String) {
    println!(
        "[acceptance] {tag} {description}: {}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "{tag} {description}: {detail}");
}

/// The shared instance grid: >= 10,000 elements across dims, kinds, scales.
fn instance_grid() -> impl Iterator<Item = (usize, Generator, f64, Matrix64)> {
    DIMS.flat_map(move |dim| {
        cleanmat::generate::ALL_GENERATORS
            .iter()
            .enumerate()
            .flat_map(move |(gi, &kind)| {
                SCALES.iter().enumerate().flat_map(move |(si, &scale)| {
                    (0..TRIALS).map(move |trial| {
                        let seed = cleanmat::rng::derive_seed(
                            MASTER_SEED,
                            &[dim as u64, gi as u64, si as u64, trial as u64],
                        );
                        let raw: Matrix64 = generate(kind, dim, seed).unwrap();
                        let t = if kind == Generator::NearHalfNorm {
                            raw
                        } else {
                            let norm = operator_norm(&raw);
                            if norm > 0.0 {
                                raw.scale_re(scale / norm)
                            } else {
                                raw
                            }
                        };
                        (dim, kind, scale, t)
                    })
                })
            })
    })
}

fn pair_grid(count: usize, master: u64) -> Vec<(usize, Projection64, Projection64)> {
    let styles = [PairStyle::Commuting, PairStyle::Nested, PairStyle::Haar];
    (0..count)
        .map(|i| {
            let dim = 2 + i % 11; // dims 2..=12
            let style = styles[i % 3];
            let seed = cleanmat::rng::derive_seed(master, &[dim as u64, i as u64]);
            let (e, f) = generate_projection_pair(style, dim, seed);
            (dim, e, f)
        })
        .collect()
}

#[test]
fn criterion_01_clean_bound_over_ten_thousand_instances() {
    let mut count = 0u64;
    let mut worst_norm = 0.0f64;
    let mut worst_resid = 0.0f64;
    for (dim, kind, scale, t) in instance_grid() {
        let profile = ToleranceProfile64::for_dim(dim);
        let cert = clean_decompose(&t, &profile).unwrap_or_else(|e| {
            panic!("clean_decompose failed: dim {dim} kind {kind} scale {scale}: {e}")
        });
        worst_resid = worst_resid.max(cert.idempotency_residual);
        worst_norm = worst_norm.max(cert.inverse_norm);
        count += 1;
    }
    conclude(
        "C1",
        "clean bound ||(T-P)^{-1}|| <= 4 + 1e-6 and idempotency <= 1e-8 on >= 10,000 instances",
        count >= 10_000 && worst_norm <= 4.0 + 1e-6 && worst_resid <= 1e-8,
        format!("count {count}, worst inverse norm {worst_norm}, worst residual {worst_resid}"),
    );
}

#[test]
fn criterion_02_small_norm_branch() {
    let mut count = 0u64;
    let mut ok = true;
    let mut detail = String::new();
    for (dim, _, _, t) in instance_grid() {
        if operator_norm(&t) > 0.5 {
            continue;
        }
        let profile = ToleranceProfile64::for_dim(dim);
        let cert = clean_decompose(&t, &profile).unwrap();
        let identity = Matrix64::identity(dim);
        let p_is_identity = fro(&cert.summand, &identity) <= 1e-12;
        let bound = cert.inverse_norm <= 2.0 + 1e-6;
        if !(p_is_identity && bound) && ok {
            ok = false;
            detail = format!(
                "dim {dim}: ||P - I|| = {}, inverse norm {}",
                fro(&cert.summand, &identity),
                cert.inverse_norm
            );
        }
        count += 1;
    }
    conclude(
        "C2",
        "||T|| <= 1/2 instances take P = I with ||(I-T)^{-1}|| <= 2 + 1e-6",
        ok && count >= 2_000,
        format!("{detail} (count {count})"),
    );
}

#[test]
fn criterion_03_idempotent_norm_bound() {
    let mut count = 0u64;
    let mut worst_slack = f64::INFINITY;
    for (dim, _, _, t) in instance_grid() {
        if operator_norm(&t) <= 0.5 {
            continue;
        }
        let profile = ToleranceProfile64::for_dim(dim);
        let cert = clean_decompose(&t, &profile).unwrap();
        let te = &t * cert.split_projection.matrix();
        let bound = 2.0 + 2.0 * operator_norm(&te) + 1e-8;
        worst_slack = worst_slack.min(bound - operator_norm(&cert.summand));
        count += 1;
    }
    conclude(
        "C3",
        "||P|| <= 2 + 2||TE|| + 1e-8 on every splitting decomposition",
        worst_slack >= 0.0 && count >= 4_000,
        format!("worst slack {worst_slack} over {count} split instances"),
    );
}

#[test]
fn criterion_04_almost_star_clean() {
    // The 2x2 worked value first: det(T - P_0) = 1/2 for the shift.
    let profile2 = ToleranceProfile64::for_dim(2);
    let shift = Matrix64::unit(2, 0, 1);
    let cert = almost_star_clean(&shift, &profile2).unwrap();
    let d = &shift - &cert.summand;
    let det = d.get(0, 0) * d.get(1, 1) - d.get(0, 1) * d.get(1, 0);
    let det_ok = (det - c64(0.5, 0.0)).norm() <= 1e-12;

    let mut count = 0u64;
    let mut ok = true;
    let mut detail = String::new();
    for (dim, kind, scale, t) in instance_grid() {
        let profile = ToleranceProfile64::for_dim(dim);
        let cert = almost_star_clean(&t, &profile).unwrap_or_else(|e| {
            panic!("almost_star_clean failed: dim {dim} kind {kind} scale {scale}: {e}")
        });
        let idem = cert.idempotency_residual <= 1e-8;
        let herm = cert.selfadjointness_residual.unwrap() <= 1e-8;
        let invertible = svd(&(&t - &cert.summand)).rank(&profile) == dim;
        if !(idem && herm && invertible) && ok {
            ok = false;
            detail = format!("dim {dim} kind {kind} scale {scale}: idem {idem} herm {herm} invertible {invertible}");
        }
        count += 1;
    }
    conclude(
        "C4",
        "almost-*-clean: self-adjoint idempotent summand, T - P0 invertible, det worked value",
        ok && det_ok && count >= 10_000,
        format!("{detail}; det = {det} (count {count})"),
    );
}

#[test]
fn criterion_05_difference_norm_law() {
    // theta = pi/3 closed-form value.
    let profile = ToleranceProfile64::for_dim(2);
    let e = Projection64::try_new(Matrix64::unit(2, 0, 0), &profile).unwrap();
    let th = std::f64::consts::FRAC_PI_3;
    let f = Projection64::from_orthonormal_columns(2, &[vec![c64(th.cos(), 0.0), c64(th.sin(), 0.0)]]);
    let cert = difference_inverse(&e, &f, &profile).unwrap();
    let reference_ok = (cert.norm_value - 2.0 / 3.0f64.sqrt()).abs() <= 1e-10;

    let mut count = 0u64;
    let mut worst_rel = 0.0f64;
    let mut i = 0u64;
    while count < 1_000 {
        let dim = 2 + (i % 11) as usize;
        let seed = cleanmat::rng::derive_seed(MASTER_SEED ^ 0xD1FF, &[dim as u64, i]);
        i += 1;
        let mut rng = SplitMix64::new(seed);
        let r1 = 1 + rng.next_below(dim - 1);
        let r2 = 1 + rng.next_below(dim - r1);
        let e: Projection64 = generate_projection(dim, r1, &mut rng);
        let f: Projection64 = generate_projection(dim, r2, &mut rng);
        let profile = ToleranceProfile64::for_dim(dim);
        let cert = difference_inverse(&e, &f, &profile).expect("admissible pair");
        let closed = (1.0 - cert.ef_norm * cert.ef_norm).powf(-0.5);
        worst_rel = worst_rel.max((cert.norm_value - closed).abs() / closed);
        count += 1;
    }
    conclude(
        "C5",
        "inverse-norm law (1 - ||EF||^2)^{-1/2} to 1e-8 relative on 1,000 pairs, pi/3 value to 1e-10",
        reference_ok && worst_rel <= 1e-8,
        format!("worst relative deviation {worst_rel}, pi/3 norm {}", cert.norm_value),
    );
}

#[test]
fn criterion_06_splitting_sandwich() {
    // Direct suite over controlled conditioning.
    let mut worst_lower = f64::INFINITY;
    let mut worst_upper = f64::INFINITY;
    let mut count = 0u64;
    for i in 0..1_000u64 {
        let dim = 1 + (i % 12) as usize;
        let profile = ToleranceProfile64::for_dim(dim);
        let seed = cleanmat::rng::derive_seed(MASTER_SEED ^ 0x5A17D, &[dim as u64, i]);
        let mut rng = SplitMix64::new(seed);
        let u: Matrix64 = cleanmat::generate::haar_unitary(dim, &mut rng);
        let v: Matrix64 = cleanmat::generate::haar_unitary(dim, &mut rng);
        let svals: Vec<Complex<f64>> = (0..dim)
            .map(|_| c64(0.6 + 2.0 * rng.next_unit(), 0.0))
            .collect();
        let t = &(&u * &Matrix64::diag(&svals)) * &v.adjoint();
        let e: Projection64 = generate_projection(dim, rng.next_below(dim + 1), &mut rng);
        let (_, cert) = invert_via_splitting(&t, &e, &profile).expect("conditions hold");
        let mid = cert.s_norm * (1.0 - cert.lambda).sqrt();
        worst_lower = worst_lower.min(mid - (1.0 / cert.t_norm - 1e-8));
        worst_upper = worst_upper.min(1.0 / cert.a1.min(cert.a2) + 1e-8 - mid);
        count += 1;
    }

    // The campaign re-checks the sandwich on every splitting call it makes.
    let config = CampaignConfig::<f64> {
        dims: (1..=6).collect(),
        trials_per_dim: 60,
        seed: 0xC6,
        ..CampaignConfig::default()
    };
    let report = run_campaign(&config).unwrap();
    let campaign_ok = ["split_sandwich_lower", "split_sandwich_upper"]
        .iter()
        .all(|name| {
            report
                .checks
                .iter()
                .find(|ch| &ch.name == name)
                .map(|ch| ch.fail_count == 0 && ch.pass_count > 0)
                .unwrap_or(false)
        });
    conclude(
        "C6",
        "norm sandwich 1/||T|| <= ||S|| sqrt(1-lambda) <= 1/min(a1,a2) with 1e-8 slack",
        worst_lower >= 0.0 && worst_upper >= 0.0 && campaign_ok && count == 1_000,
        format!("worst lower slack {worst_lower}, worst upper slack {worst_upper}, campaign ok {campaign_ok}"),
    );
}

#[test]
fn criterion_07_halmos_reconstruction() {
    let mut worst_recon = 0.0f64;
    let mut worst_pq = 0.0f64;
    let mut worst_units = 0.0f64;
    let pairs = pair_grid(1_000, MASTER_SEED ^ 0x4A1);
    for (dim, e, f) in &pairs {
        let profile = ToleranceProfile64::for_dim(*dim);
        let pd = decompose_pair(e, f, &profile).unwrap();
        let budget_scale = *dim as f64;
        worst_recon = worst_recon
            .max(fro(&pd.reconstruct_e(), e.matrix()) / budget_scale)
            .max(fro(&pd.reconstruct_f(), f.matrix()) / budget_scale);
        let diff = &pd.generic_p() - &pd.generic_q();
        let pq = fro(&(&diff * &diff), &(pd.generic_unit.matrix() - &pd.h)) / budget_scale;
        worst_pq = worst_pq.max(pq);
        let units = [[&pd.e11, &pd.e12], [&pd.e21, &pd.e22]];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        let prod = units[i][j] * units[k][l];
                        let expect = if j == k {
                            units[i][l].clone()
                        } else {
                            Matrix64::zeros(*dim)
                        };
                        worst_units = worst_units.max(fro(&prod, &expect));
                    }
                }
            }
        }
    }
    conclude(
        "C7",
        "pair reconstruction and (P-Q)^2 = I0 - H to dim*1e-9, matrix units to 1e-9, 1,000 pairs",
        worst_recon <= 1e-9 && worst_pq <= 1e-9 && worst_units <= 1e-9,
        format!("worst recon/dim {worst_recon}, worst (P-Q)^2 {worst_pq}, worst units {worst_units}"),
    );
}

#[test]
fn criterion_08_remark_identities() {
    let mut worst_rot = 0.0f64;
    let mut worst_p0 = 0.0f64;
    let mut nondegenerate = 0u64;
    let pairs = pair_grid(1_000, MASTER_SEED ^ 0xB0);
    for (dim, e, f) in &pairs {
        let profile = ToleranceProfile64::for_dim(*dim);
        let pd = decompose_pair(e, f, &profile).unwrap();

        // [(I0 - iE21 + iE12) - 2Q]^2 = 2 I0, and the P version.
        let i_unit = c64(0.0, 1.0);
        let base = &(pd.generic_unit.matrix() - &pd.e21.scale(i_unit)) + &pd.e12.scale(i_unit);
        let two_i0 = pd.generic_unit.matrix().scale_re(2.0);
        for half in [pd.generic_q(), pd.generic_p()] {
            let w = &base - &half.scale_re(2.0);
            worst_rot = worst_rot.max(fro(&(&w * &w), &two_i0) / *dim as f64);
        }

        // ||P0 F^perp|| = 1/sqrt(2) whenever the generic part or E^F^perp is
        // nonzero; a witness exists iff the corner ranks match.
        if pd.meet_efp.rank() == pd.meet_epf.rank() {
            let u = equivalent(&pd.meet_efp, &pd.meet_epf, &profile)
                .unwrap()
                .unwrap();
            let p0 = build_p0(e, f, &u, &profile).unwrap();
            if pd.generic_unit.rank() > 0 || pd.meet_efp.rank() > 0 {
                let norm = operator_norm(&(p0.matrix() * f.complement().matrix()));
                worst_p0 = worst_p0.max((norm - 0.5f64.sqrt()).abs());
                nondegenerate += 1;
            }
        }
    }

    // Equal-rank pairs always carry a witness, so they exercise the P0 norm
    // identity densely.
    for i in 0..300u64 {
        let dim = 2 + (i % 11) as usize;
        let profile = ToleranceProfile64::for_dim(dim);
        let seed = cleanmat::rng::derive_seed(MASTER_SEED ^ 0xE0, &[dim as u64, i]);
        let mut rng = SplitMix64::new(seed);
        let rank = 1 + rng.next_below(dim - 1);
        let e: Projection64 = generate_projection(dim, rank, &mut rng);
        let f: Projection64 = generate_projection(dim, rank, &mut rng);
        let pd = decompose_pair(&e, &f, &profile).unwrap();
        let u = equivalent(&pd.meet_efp, &pd.meet_epf, &profile)
            .unwrap()
            .expect("equal ranks imply equal corner ranks");
        let p0 = build_p0(&e, &f, &u, &profile).unwrap();
        if pd.generic_unit.rank() > 0 || pd.meet_efp.rank() > 0 {
            let norm = operator_norm(&(p0.matrix() * f.complement().matrix()));
            worst_p0 = worst_p0.max((norm - 0.5f64.sqrt()).abs());
            nondegenerate += 1;
        }
    }
    conclude(
        "C8",
        "remark identities: rotation square = 2 I0 and ||P0 F^perp|| = 1/sqrt(2), 1e-8",
        worst_rot <= 1e-8 && worst_p0 <= 1e-8 && nondegenerate >= 300,
        format!("worst rotation {worst_rot}, worst P0 deviation {worst_p0}, nondegenerate {nondegenerate}"),
    );
}

#[test]
fn criterion_09_corner_inverse() {
    let mut worst = 0.0f64;
    for i in 0..1_000u64 {
        let dim = 1 + (i % 16) as usize;
        let profile = ToleranceProfile64::for_dim(dim);
        let kind = if i % 2 == 0 {
            Generator::Ginibre
        } else {
            Generator::RankDeficient
        };
        let seed = cleanmat::rng::derive_seed(MASTER_SEED ^ 0xC0, &[dim as u64, i]);
        let t: Matrix64 = generate(kind, dim, seed).unwrap();
        let s = cleanmat::corner_inverse(&t, &profile);
        let l = cleanmat::left_projection(&t, &profile);
        let r = cleanmat::right_projection(&t, &profile);
        worst = worst
            .max(operator_norm(&(&(&s * &t) - r.matrix())))
            .max(operator_norm(&(&(&t * &s) - l.matrix())));
    }
    conclude(
        "C9",
        "corner inverse: ST = R(T) and TS = L(T) to 1e-9 on 1,000 matrices incl. rank-deficient",
        worst <= 1e-9,
        format!("worst residual {worst}"),
    );
}

#[test]
fn criterion_10_lower_bound_and_isometry_factor_suites() {
    // Difference lower bound: E(A-B)^*(A-B)E >= (a-b)^2 E.
    let mut worst_ab = f64::INFINITY;
    for i in 0..1_000u64 {
        let dim = 2 + (i % 7) as usize;
        let profile = ToleranceProfile64::for_dim(dim);
        let seed = cleanmat::rng::derive_seed(MASTER_SEED ^ 0xAB, &[dim as u64, i]);
        let mut rng = SplitMix64::new(seed);
        let u: Matrix64 = cleanmat::generate::haar_unitary(dim, &mut rng);
        let v: Matrix64 = cleanmat::generate::haar_unitary(dim, &mut rng);
        let svals: Vec<Complex<f64>> = (0..dim)
            .map(|_| c64(1.2 + 1.8 * rng.next_unit(), 0.0))
            .collect();
        let a_mat = &(&u * &Matrix64::diag(&svals)) * &v.adjoint();
        let e: Projection64 = generate_projection(dim, 1 + rng.next_below(dim), &mut rng);

        let basis = e.range_basis();
        let aa = &a_mat.adjoint() * &a_mat;
        let comp = matrix::compress(&aa, &basis).unwrap();
        let a_low = hermitian_eig(&comp, &profile).unwrap().eigenvalues[0].sqrt();

        let g: Matrix64 = generate(Generator::Ginibre, dim, rng.next_u64()).unwrap();
        let ge = operator_norm(&(&g * e.matrix()));
        let ratio = 0.1 + 0.8 * rng.next_unit();
        let b_mat = g.scale_re(ratio * a_low / ge.max(1e-12));
        let b_norm = operator_norm(&(&b_mat * e.matrix()));

        let d = &a_mat - &b_mat;
        let dd = &d.adjoint() * &d;
        let comp2 = matrix::compress(&dd, &basis).unwrap();
        let low = hermitian_eig(&comp2, &profile).unwrap().eigenvalues[0];
        worst_ab = worst_ab.min(low - (a_low - b_norm) * (a_low - b_norm) + 1e-8);
    }

    // Isometry factor: (TS)^*(TS) = E and TS(TS)^* = L(TE).
    let mut worst_tes = 0.0f64;
    for i in 0..1_000u64 {
        let dim = 2 + (i % 7) as usize;
        let profile = ToleranceProfile64::for_dim(dim);
        let seed = cleanmat::rng::derive_seed(MASTER_SEED ^ 0x7E5, &[dim as u64, i]);
        let mut rng = SplitMix64::new(seed);
        let u: Matrix64 = cleanmat::generate::haar_unitary(dim, &mut rng);
        let v: Matrix64 = cleanmat::generate::haar_unitary(dim, &mut rng);
        let svals: Vec<Complex<f64>> = (0..dim)
            .map(|_| c64(0.5 + 1.5 * rng.next_unit(), 0.0))
            .collect();
        let t = &(&u * &Matrix64::diag(&svals)) * &v.adjoint();
        let e: Projection64 = generate_projection(dim, 1 + rng.next_below(dim), &mut rng);

        let basis = e.range_basis();
        let tt = &t.adjoint() * &t;
        let comp = matrix::compress(&tt, &basis).unwrap();
        let a = hermitian_eig(&comp, &profile).unwrap().eigenvalues[0].sqrt() * (1.0 - 1e-9);
        let s = isometry_factor(&t, &e, a, &profile).expect("lower bound measured");
        let ts = &t * &s;
        let init = fro(&(&ts.adjoint() * &ts), e.matrix());
        let te = &t * e.matrix();
        let lte = left_projection_scaled(&te, &profile, operator_norm(&t));
        let fin = fro(&(&ts * &ts.adjoint()), lte.matrix());
        worst_tes = worst_tes.max(init).max(fin);
    }
    conclude(
        "C10",
        "difference lower-bound and isometry-factor suites, 1e-8 slack, 1,000 instances each",
        worst_ab >= 0.0 && worst_tes <= 1e-8,
        format!("worst lower-bound slack {worst_ab}, worst isometry residual {worst_tes}"),
    );
}

#[test]
fn criterion_11_exhaustive_2x2_grid_oracle() {
    let entries: [Complex<f64>; 7] = [
        c64(0.0, 0.0),
        c64(0.5, 0.0),
        c64(-0.5, 0.0),
        c64(1.0, 0.0),
        c64(-1.0, 0.0),
        c64(0.0, 1.0),
        c64(0.0, -1.0),
    ];
    let profile = ToleranceProfile64::for_dim(2);
    let mut total = 0u64;
    let mut agreements = 0u64;
    for &a in &entries {
        for &b in &entries {
            for &x in &entries {
                for &d in &entries {
                    let t = Matrix64::from_rows(&[vec![a, b], vec![x, d]]).unwrap();
                    let cert = clean_decompose(&t, &profile).unwrap();
                    let m = &t - &cert.summand;
                    // Cofactor determinant, independent of the SVD path.
                    let det = m.get(0, 0) * m.get(1, 1) - m.get(0, 1) * m.get(1, 0);
                    let det_verdict =
                        det.norm() > profile.rank_cutoff_rel * m.frobenius_norm().powi(2);
                    let svd_verdict = svd(&m).rank(&profile) == 2;
                    total += 1;
                    if det_verdict == svd_verdict && svd_verdict {
                        agreements += 1;
                    }
                }
            }
        }
    }
    conclude(
        "C11",
        "2x2 grid: cofactor determinant agrees with the SVD invertibility verdict on 100%",
        total == 2_401 && agreements == total,
        format!("{agreements}/{total} agreements"),
    );
}

#[test]
fn criterion_12_campaign_determinism() {
    let config = CampaignConfig::<f64> {
        dims: vec![1, 2, 3, 4, 5],
        trials_per_dim: 30,
        seed: 0xD37E_12,
        ..CampaignConfig::default()
    };
    let a = run_campaign(&config).unwrap();
    let b = run_campaign(&config).unwrap();
    let identical = a.numerically_close(&b, 1e-12);
    conclude(
        "C12",
        "identical (seed, config) reproduce numerically identical campaign reports",
        identical && a.passed(),
        format!(
            "identical {identical}, passed {} ({} failures)",
            a.passed(),
            a.failures.len()
        ),
    );
}

#[test]
fn default_campaign_configuration_passes() {
    let report = run_campaign(&CampaignConfig::<f64>::default()).unwrap();
    assert!(
        report.passed(),
        "default campaign reported failures: {:#?}",
        report.failures
    );
    assert_eq!(report.total_instances, 1_600);
}

#[test]
fn certificates_pass_independent_verification() {
    // Round-trip sanity on top of the numbered criteria: every certificate
    // re-verifies from scratch.
    for (i, (dim, _, _, t)) in instance_grid().step_by(97).enumerate() {
        let profile = ToleranceProfile64::for_dim(dim);
        let clean = clean_decompose(&t, &profile).unwrap();
        assert!(
            verify_certificate(&t, &clean, &profile).passed,
            "clean certificate {i} failed re-verification"
        );
        let star = almost_star_clean(&t, &profile).unwrap();
        assert_eq!(star.kind, CertificateKind::AlmostStarProjection);
        assert!(
            verify_certificate(&t, &star, &profile).passed,
            "star certificate {i} failed re-verification"
        );
    }
}
