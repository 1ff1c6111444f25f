mod common;

use common::*;
use pathtransport::{
    change_law_basis, change_tensor_basis, contract, tensor_product, transport_matrix,
    transport_tensor, BasisChange, BasisChangeField, Domain, Interpolation, Matrix,
    TensorComponents,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn vec_pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1usize..=4).prop_flat_map(|n| {
        (
            prop::collection::vec(-10.0..10.0f64, n),
            prop::collection::vec(-10.0..10.0f64, n),
        )
    })
}

fn tensor_of(p: usize, q: usize, n: usize) -> impl Strategy<Value = TensorComponents> {
    prop::collection::vec(-5.0..5.0f64, n.pow((p + q) as u32)).prop_map(move |v| {
        if p + q == 0 {
            TensorComponents::scalar(v[0])
        } else {
            TensorComponents::new(p, q, n, v).unwrap()
        }
    })
}

fn any_tensor() -> impl Strategy<Value = TensorComponents> {
    (0usize..=2, 0usize..=2, 1usize..=3).prop_flat_map(|(p, q, n)| tensor_of(p, q, n))
}

proptest! {
    #[test]
    fn pairing_is_contracted_product((v, w) in vec_pair()) {
        let t = tensor_product(&TensorComponents::vector(&v), &TensorComponents::covector(&w)).unwrap();
        let c = contract(&t, 0, 0).unwrap();
        let pairing: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
        prop_assert!(c.is_scalar());
        prop_assert!((c.values()[0] - pairing).abs() <= 1e-12 * (1.0 + pairing.abs()));
    }

    #[test]
    fn basis_change_round_trip(t in any_tensor(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = BasisChange::new(random_invertible(&mut rng, t.dim())).unwrap();
        let there = change_tensor_basis(&t, &ch).unwrap();
        let back = change_tensor_basis(&there, &ch.reversed()).unwrap();
        prop_assert!(back.max_diff(&t).unwrap() <= 1e-12 * (1.0 + t.max_abs()));
    }

    #[test]
    fn scalars_are_untouched(x in -1e6..1e6f64, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = TensorComponents::scalar(x);
        let ch = BasisChange::new(random_invertible(&mut rng, 3)).unwrap();
        prop_assert_eq!(change_tensor_basis(&s, &ch).unwrap(), s.clone());
        let law = SmoothMatrixFn::random(&mut rng, 3).law(Domain::new(0.0, 1.0).unwrap());
        let tm = transport_matrix(&law, 0.0, 0.7, 1e-2).unwrap();
        prop_assert_eq!(transport_tensor(&tm, &s).unwrap(), s.clone());
        let other = TensorComponents::scalar(2.0);
        let prod = tensor_product(&s, &other).unwrap();
        prop_assert_eq!(prod.values(), &[2.0 * x]);
    }

    /// Product of two (1,1) tensors contracted across the factors is the
    /// matrix product.
    #[test]
    fn contracted_product_is_matrix_product(n in 2usize..=3, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (random_matrix(&mut rng, n, 1.0), random_matrix(&mut rng, n, 1.0));
        let ab = tensor_product(&TensorComponents::from_matrix(&a), &TensorComponents::from_matrix(&b)).unwrap();
        // slots: upper (a, b), lower (a, b); pair a's lower with b's upper
        let c = contract(&ab, 1, 0).unwrap().to_matrix().unwrap();
        prop_assert!(c.max_diff(&(&a * &b)) < 1e-14);
    }
}

/// Smooth basis change `A(s) = M0 + s M1 + sin(s) M2` with analytic derivative.
fn smooth_change(rng: &mut ChaCha8Rng, n: usize, domain: Domain) -> BasisChangeField {
    let m0 = random_invertible(rng, n);
    let (m1, m2) = (random_matrix(rng, n, 0.2), random_matrix(rng, n, 0.2));
    let (d1, d2) = (m1.clone(), m2.clone());
    BasisChangeField::new(n, domain, move |s| {
        let mut a = m0.clone();
        a.axpy(s, &m1);
        a.axpy(s.sin(), &m2);
        a
    })
    .with_derivative(move |s| {
        let mut d = d1.clone();
        d.axpy(s.cos(), &d2);
        d
    })
}

/// A then B equals the composed change `A B`, evaluated pointwise.
#[test]
fn law_basis_change_is_an_action() {
    let domain = Domain::new(0.0, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [2, 3] {
        for _ in 0..5 {
            let law = SmoothMatrixFn::random(&mut rng, n).law(domain);
            let (a, b) = (
                smooth_change(&mut rng, n, domain),
                smooth_change(&mut rng, n, domain),
            );
            let (a2, b2) = (a.clone(), b.clone());
            let composed = BasisChangeField::new(n, domain, {
                let (a, b) = (a.clone(), b.clone());
                move |s| {
                    a.at(s)
                        .unwrap()
                        .compose(&b.at(s).unwrap())
                        .unwrap()
                        .forward()
                        .clone()
                }
            })
            .with_derivative(move |s| {
                a2.at(s)
                    .unwrap()
                    .compose(&b2.at(s).unwrap())
                    .unwrap()
                    .derivative()
                    .unwrap()
                    .clone()
            });
            let twice = change_law_basis(&change_law_basis(&law, &a).unwrap(), &b).unwrap();
            let once = change_law_basis(&law, &composed).unwrap();
            for s in domain.linspace(9) {
                let d = twice.coefficients(s).max_diff(&once.coefficients(s));
                assert!(d < 1e-8, "n={n} s={s} diff={d:e}");
            }
        }
    }
}

#[test]
fn law_basis_change_examples() {
    let domain = Domain::new(0.0, 1.0).unwrap();
    let zero = pathtransport::TransportLaw::trivial(2, domain);
    let constant = BasisChangeField::constant(
        Matrix::from_rows(&[[2.0, 1.0], [0.5, 3.0]]).unwrap(),
        domain,
    );
    assert_eq!(
        change_law_basis(&zero, &constant)
            .unwrap()
            .coefficients(0.4)
            .max_abs(),
        0.0
    );
    let exp_scaling = BasisChangeField::new(2, domain, |s| Matrix::diag(&[s.exp(), 1.0]))
        .with_derivative(|s| Matrix::diag(&[s.exp(), 0.0]));
    let g = change_law_basis(&zero, &exp_scaling).unwrap();
    for s in [0.0, 0.5, 1.0] {
        assert!(g.coefficients(s).max_diff(&Matrix::diag(&[1.0, 0.0])) < 1e-15);
    }
    // same with finite-difference derivatives
    let fd = change_law_basis(&zero, &exp_scaling.without_derivative()).unwrap();
    for s in [0.0, 0.5, 1.0] {
        assert!(fd.coefficients(s).max_diff(&Matrix::diag(&[1.0, 0.0])) < 1e-8);
    }
    let tabulated = SmoothMatrixFn::random(&mut ChaCha8Rng::seed_from_u64(3), 2).tabulated(
        domain,
        21,
        Interpolation::Cubic,
    );
    assert!(change_law_basis(
        &tabulated,
        &BasisChangeField::constant(Matrix::identity(3), domain)
    )
    .is_err());
}
