use std::sync::{Arc, OnceLock};

use linset_core::*;
use proptest::prelude::*;

fn f_3_4() -> Arc<FieldCtx> {
    static CTX: OnceLock<Arc<FieldCtx>> = OnceLock::new();
    CTX.get_or_init(|| Arc::new(FieldCtx::new(3, 1, 4).unwrap())).clone()
}

fn f_4_3() -> Arc<FieldCtx> {
    static CTX: OnceLock<Arc<FieldCtx>> = OnceLock::new();
    CTX.get_or_init(|| Arc::new(FieldCtx::new(2, 2, 3).unwrap())).clone()
}

fn elt(ctx: &FieldCtx, k: u64) -> Felt {
    if k == 0 {
        Felt::ZERO
    } else {
        ctx.g_pow(k as i128)
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn arb_elt(ctx: Arc<FieldCtx>) -> impl Strategy<Value = Felt> {
    (0..ctx.size()).prop_map(move |k| elt(&ctx, k))
}

fn arb_poly(ctx: Arc<FieldCtx>) -> impl Strategy<Value = SigmaPoly> {
    let n = ctx.n() as usize;
    let ss: Vec<u32> = (1..ctx.n()).filter(|&s| gcd(s, ctx.n()) == 1).collect();
    (prop::sample::select(ss), prop::collection::vec(arb_elt(ctx.clone()), n))
        .prop_map(move |(s, coeffs)| SigmaPoly::new(ctx.clone(), s, coeffs).unwrap())
}

proptest! {
    #[test]
    fn field_distributes(a in arb_elt(f_4_3()), b in arb_elt(f_4_3()), c in arb_elt(f_4_3())) {
        let k = f_4_3();
        prop_assert_eq!(k.mul(a, k.add(b, c)), k.add(k.mul(a, b), k.mul(a, c)));
        prop_assert_eq!(k.sub(k.add(a, b), b), a);
    }

    #[test]
    fn frobenius_is_additive(a in arb_elt(f_3_4()), b in arb_elt(f_3_4()), i in 0i64..8) {
        let k = f_3_4();
        prop_assert_eq!(k.frobenius(k.add(a, b), i), k.add(k.frobenius(a, i), k.frobenius(b, i)));
    }

    #[test]
    fn element_text_round_trips(a in arb_elt(f_3_4())) {
        let k = f_3_4();
        prop_assert_eq!(k.parse_elt(&a.to_string()).unwrap(), a);
        prop_assert_eq!(k.from_coeffs(&k.to_coeffs(a)).unwrap(), a);
    }

    #[test]
    fn poly_text_round_trips(f in arb_poly(f_3_4())) {
        let g = SigmaPoly::parse(f.ctx().clone(), None, &f.to_string()).unwrap();
        prop_assert_eq!(g, f);
    }

    #[test]
    fn poly_is_fq_linear(f in arb_poly(f_4_3()), x in arb_elt(f_4_3()), y in arb_elt(f_4_3()), c in 0u64..4) {
        let k = f.ctx().clone();
        // F_q sits inside as 0 and the powers g^{j*theta}
        let lambda = if c == 0 { Felt::ZERO } else { k.g_pow((c * k.theta()) as i128) };
        let lhs = f.eval(k.add(k.mul(lambda, x), y));
        let rhs = k.add(k.mul(lambda, f.eval(x)), f.eval(y));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn rank_nullity(f in arb_poly(f_3_4())) {
        prop_assert_eq!(f.image_rank() + f.kernel_dim(), f.n());
        prop_assert_eq!(rank_nested_minors(&f), f.image_rank());
    }

    #[test]
    fn adjoint_is_involutive(f in arb_poly(f_4_3())) {
        prop_assert_eq!(f.adjoint().adjoint(), f);
    }
}
