use std::sync::{Arc, OnceLock};

use pdchain::algebra::{hh_divided_power, hh_gamma_stability, hochschild_complex, CommAlgebra, HochschildComplex};
use pdchain::chain::{tensor_complexes, ChainMap};
use pdchain::coefficients::{binomial, dp_coefficient, factorial, RingSpec, Scalar};
use pdchain::combinat::{block_shuffle_cosets, block_shuffles, shuffles, SignedPermutation};
use pdchain::divpow::SimplicialCommAlgebra;
use pdchain::doldkan::{project_normalized, roundtrip_isos, triangle_identities, EilenbergZilber};
use pdchain::linalg::{vec_add, vec_scale};
use pdchain::simplicial::{moore_complex, SimplicialModule};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn f2() -> RingSpec {
    RingSpec::integers_mod(2).unwrap()
}

fn f3() -> RingSpec {
    RingSpec::integers_mod(3).unwrap()
}

fn dual_numbers() -> &'static HochschildComplex {
    static HC: OnceLock<HochschildComplex> = OnceLock::new();
    HC.get_or_init(|| hochschild_complex(&Arc::new(CommAlgebra::truncated_polynomial(f2(), 2)), 4).unwrap())
}

/// `F_3[x]/x^3` through level 4.
fn cubic() -> &'static HochschildComplex {
    static HC: OnceLock<HochschildComplex> = OnceLock::new();
    HC.get_or_init(|| hochschild_complex(&Arc::new(CommAlgebra::truncated_polynomial(f3(), 3)), 4).unwrap())
}

fn square_zero_f3() -> &'static HochschildComplex {
    static HC: OnceLock<HochschildComplex> = OnceLock::new();
    HC.get_or_init(|| hochschild_complex(&Arc::new(CommAlgebra::truncated_polynomial(f3(), 2)), 5).unwrap())
}

fn normalized_element(x: &SimplicialCommAlgebra, n: usize, seed: u64) -> Vec<Scalar> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = pdchain::random::vector(&mut rng, x.ring(), x.rank(n), 3);
    project_normalized(&x.underlying, n, &v)
}

fn moore_d(x: &SimplicialModule, n: usize, v: &[Scalar]) -> Vec<Scalar> {
    moore_complex(x).d(n).apply(v)
}

fn scaled(ring: RingSpec, k: i64, v: &[Scalar]) -> Vec<Scalar> {
    vec_scale(ring, &ring.from_i64(k), v)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn gamma_one_is_the_identity(seed in any::<u64>(), n in 1usize..=4) {
        let x = &dual_numbers().bar;
        let a = normalized_element(x, n, seed);
        prop_assert_eq!(x.divided_power_cycle(n, &a, 1).unwrap(), a);
    }

    #[test]
    fn factorial_gamma_is_the_full_shuffle_sum(seed in any::<u64>(), n in 1usize..=2, i in 2usize..=3) {
        prop_assume!(n * i <= 4);
        // Characteristic 2 in every degree, characteristic 3 in even degrees.
        for (x, ok) in [(&dual_numbers().bar, true), (&cubic().bar, n % 2 == 0)] {
            if !ok {
                continue;
            }
            let ring = x.ring();
            let a = normalized_element(x, n, seed);
            let g = x.divided_power_cycle(n, &a, i).unwrap();
            let f: i64 = factorial(i as u64).try_into().unwrap();
            prop_assert_eq!(scaled(ring, f, &g), x.power_map_pi(n, &a, i).unwrap());
        }
    }

    #[test]
    fn coset_representatives_do_not_matter_in_even_degree(seed in any::<u64>(), moves in proptest::collection::vec(0usize..2, 3)) {
        let (n, i) = (2, 2);
        let x = &cubic().bar;
        let a = normalized_element(x, n, seed);
        let swap = SignedPermutation::block_permutation(&[1, 0], n);
        let reps: Vec<SignedPermutation> = block_shuffle_cosets(n, i)
            .unwrap()
            .into_iter()
            .enumerate()
            .map(|(k, s)| if moves[k % moves.len()] == 1 { s.compose(&swap) } else { s })
            .collect();
        prop_assert_eq!(x.shuffle_power(n, &a, i, &reps).unwrap(), x.divided_power_cycle(n, &a, i).unwrap());
    }

    #[test]
    fn full_shuffle_sum_commutes_with_d_as_a_power(seed in any::<u64>()) {
        // d P_2(a) = 2 a d(a) for a in even degree: P_2(a) = a a and d is a derivation.
        let x = &cubic().bar;
        let ring = x.ring();
        let a = normalized_element(x, 2, seed);
        let p = x.power_map_pi(2, &a, 2).unwrap();
        let da = moore_d(&x.underlying, 2, &a);
        let rhs = scaled(ring, 2, &x.chain_product(2, &a, 1, &da).unwrap());
        prop_assert_eq!(moore_d(&x.underlying, 4, &p), rhs);
        prop_assert_eq!(p, x.chain_product(2, &a, 2, &a).unwrap());
    }

    #[test]
    fn derivation_rule_in_even_degree(seed in any::<u64>(), i in 2usize..=2) {
        let x = &cubic().bar;
        let a = normalized_element(x, 2, seed);
        let g = x.divided_power_cycle(2, &a, i).unwrap();
        prop_assert_eq!(moore_d(&x.underlying, 2 * i, &g), x.derivation_rhs(2, &a, i).unwrap());
    }

    #[test]
    fn leibniz_rule(seed in any::<u64>(), p in 1usize..=2, q in 1usize..=2) {
        let x = &cubic().bar;
        let ring = x.ring();
        let (a, b) = (normalized_element(x, p, seed), normalized_element(x, q, seed ^ 1));
        let ab = x.chain_product(p, &a, q, &b).unwrap();
        let left = x.chain_product(p - 1, &moore_d(&x.underlying, p, &a), q, &b).unwrap();
        let right = x.chain_product(p, &a, q - 1, &moore_d(&x.underlying, q, &b)).unwrap();
        let sign = if p % 2 == 0 { 1 } else { -1 };
        prop_assert_eq!(moore_d(&x.underlying, p + q, &ab), vec_add(ring, &left, &scaled(ring, sign, &right)));
    }

    #[test]
    fn hochschild_gamma_ignores_lifts_over_f2(seed in any::<u64>(), class in proptest::collection::vec(0i64..2, 2)) {
        let hc = dual_numbers();
        let class: Vec<Scalar> = class.into_iter().map(|c| f2().from_i64(c)).collect();
        prop_assert!(hh_gamma_stability(hc, 1, &class, 2, 20, seed).unwrap().is_empty());
        prop_assert!(hh_gamma_stability(hc, 1, &class, 3, 20, seed).unwrap().is_empty());
    }

    #[test]
    fn twice_gamma_two_is_the_square_on_hochschild_homology(seed in any::<u64>()) {
        let hc = square_zero_f3();
        let ring = f3();
        let h = hc.homology(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let class = pdchain::random::vector(&mut rng, ring, h.generator_count(), 3);
        let g = hh_divided_power(hc, 2, &class, 2).unwrap();
        let z = project_normalized(&hc.cyclic.underlying, 2, &h.cycle_from_class(&class));
        let square = hc.homology(4).unwrap().class_of(&hc.cyclic.chain_product(2, &z, 2, &z).unwrap()).unwrap();
        prop_assert_eq!(scaled(ring, 2, &g), square);
    }

    #[test]
    fn dold_kan_round_trips(seed in any::<u64>(), top in 1usize..=4, over_f5 in any::<bool>()) {
        let ring = if over_f5 { RingSpec::integers_mod(5).unwrap() } else { RingSpec::Integers };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = pdchain::random::chain_complex(&mut rng, ring, top, 3);
        let x = pdchain::random::simplicial_module(&mut rng, ring, top, 2);
        let (phi, psi) = roundtrip_isos(&c, &x, top).unwrap();
        prop_assert!(phi.is_chain_map() && phi.is_iso());
        prop_assert!(psi.is_simplicial() && psi.is_iso());
        prop_assert_eq!(triangle_identities(&c, &x, top).unwrap(), (true, true));
    }

    #[test]
    fn alexander_whitney_inverts_shuffle(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = pdchain::random::simplicial_module(&mut rng, RingSpec::Integers, 3, 2);
        let y = pdchain::random::simplicial_module(&mut rng, RingSpec::Integers, 3, 2);
        let ez = EilenbergZilber::new(&x, &y).unwrap();
        prop_assert!(ez.shuffle().is_chain_map());
        prop_assert!(ez.alexander_whitney().is_chain_map());
        prop_assert!(ez.alexander_whitney().compose(&ez.shuffle()).equals(&ChainMap::identity(&ez.tensor)));
        prop_assert_eq!(ez.tensor.ranks(), tensor_complexes(&ez.nx.complex, &ez.ny.complex).unwrap().truncate(3).ranks());
    }
}

proptest! {
    #[test]
    fn dp_coefficient_times_denominator_is_a_factorial(i in 1u64..=8, j in 1u64..=6) {
        let lhs = dp_coefficient(i, j).unwrap() * factorial(i) * factorial(j).pow(i as u32);
        prop_assert_eq!(lhs, factorial(i * j));
    }

    #[test]
    fn shuffle_counts(p in 0usize..=4, q in 0usize..=4) {
        prop_assert_eq!(shuffles(p, q).len().to_string(), binomial((p + q) as u64, p as i64).to_string());
    }

    #[test]
    fn cosets_partition_block_shuffles(n in 1usize..=3, i in 1usize..=3) {
        prop_assume!(n * i <= 8);
        let all = block_shuffles(n, i).unwrap().len();
        let cosets = block_shuffle_cosets(n, i).unwrap().len();
        prop_assert_eq!(all, cosets * (1..=i).product::<usize>());
    }
}
