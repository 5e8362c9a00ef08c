use cohomlen::asymptotics::{
    fit_quasipolynomial, fit_values, growth_estimate, length_sequence, limit_via_volume, to_generating_function,
    RationalGeneratingFunction,
};
use cohomlen::cech::cech_oracle;
use cohomlen::dsl::{format_graph, format_ideal, parse_graph, parse_ideal};
use cohomlen::graphs::{edge_ideal, locally_bipartite, prop45_criterion, Graph};
use cohomlen::homology::{reduced_homology_dims, FieldSpec, SimplicialComplex};
use cohomlen::ideal::{ExponentVector, FamilyMember, IdealFamily, MonomialIdeal};
use cohomlen::polyhedra::{
    integral_closure_generators, nc_membership, polytope_volume, IntegralClosurePower,
    NewtonPolyhedron,
};
use cohomlen::takayama::{graded_dim, member_total_length, support_bound, GradedPieceQuery};
use num_bigint::BigInt;
use num_rational::Rational64;
use proptest::prelude::*;

const Q: FieldSpec = FieldSpec::Rationals;

fn ideal_strategy(max_dim: usize, max_exp: i64) -> impl Strategy<Value = MonomialIdeal> {
    (1..=max_dim).prop_flat_map(move |d| {
        proptest::collection::vec(proptest::collection::vec(0..=max_exp, d), 1..=5).prop_map(
            move |gens| MonomialIdeal::new(d, gens.into_iter().map(ExponentVector::new)).unwrap(),
        )
    })
}

fn graph_strategy() -> impl Strategy<Value = Graph> {
    (3usize..=7).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        proptest::sample::subsequence(pairs.clone(), 1..=pairs.len())
            .prop_map(move |edges| Graph::new(n, edges).unwrap())
    })
}

fn box_points(lo: &[i64], hi: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for (l, h) in lo.iter().zip(hi) {
        out = out
            .into_iter()
            .flat_map(|p| {
                (*l..=*h).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn takayama_matches_cech(ideal in ideal_strategy(3, 3)) {
        let d = ideal.dim();
        let hi = support_bound(&ideal).into_entries();
        for a in box_points(&vec![-1; d], &hi) {
            let deg = ExponentVector::new(a);
            for i in 0..=d {
                let q = GradedPieceQuery { ideal: ideal.clone(), i, degree: deg.clone() };
                prop_assert_eq!(graded_dim(&q, Q).unwrap(), cech_oracle(&ideal, i, &deg).unwrap());
            }
        }
    }

    #[test]
    fn integral_closure_paths_agree(ideal in ideal_strategy(3, 3), n in 1u64..=4, i in 0usize..=3) {
        let poly = NewtonPolyhedron::of_ideal(&ideal).unwrap();
        let polyhedral = FamilyMember::IntegralClosure(IntegralClosurePower::new(poly, n));
        let explicit = FamilyMember::Ideal(integral_closure_generators(&ideal, n).unwrap());
        prop_assert_eq!(
            member_total_length(&polyhedral, i, Q).unwrap(),
            member_total_length(&explicit, i, Q).unwrap()
        );
    }

    #[test]
    fn integral_closure_contains_powers(ideal in ideal_strategy(3, 3), n in 1u32..=3) {
        let poly = NewtonPolyhedron::of_ideal(&ideal).unwrap();
        for g in ideal.power(n).unwrap().gens() {
            prop_assert!(nc_membership(&poly, n as u64, g));
        }
    }

    #[test]
    fn integral_closure_is_graded(
        ideal in ideal_strategy(3, 3),
        a in proptest::collection::vec(0i64..12, 3),
        b in proptest::collection::vec(0i64..12, 3),
        n in 1u64..=3,
        m in 1u64..=3,
    ) {
        let d = ideal.dim();
        let poly = NewtonPolyhedron::of_ideal(&ideal).unwrap();
        let a = ExponentVector::new(a[..d].to_vec());
        let b = ExponentVector::new(b[..d].to_vec());
        if nc_membership(&poly, n, &a) && nc_membership(&poly, m, &b) {
            prop_assert!(nc_membership(&poly, n + m, &a.checked_add(&b).unwrap()));
        }
    }

    #[test]
    fn volume_is_permutation_invariant(
        pts in proptest::collection::vec(proptest::collection::vec(-4i64..=4, 3), 4..=8),
        perm in Just(vec![0usize, 1, 2]).prop_shuffle(),
    ) {
        let r = |p: &Vec<i64>| p.iter().map(|&x| Rational64::from_integer(x)).collect::<Vec<_>>();
        let orig: Vec<_> = pts.iter().map(r).collect();
        let permuted: Vec<_> = pts
            .iter()
            .map(|p| r(&perm.iter().map(|&k| p[k]).collect()))
            .collect();
        prop_assert_eq!(polytope_volume(3, &orig).unwrap(), polytope_volume(3, &permuted).unwrap());
    }

    #[test]
    fn generating_function_round_trip(
        numerator in proptest::collection::vec(-5i64..=5, 1..=6),
        factors in proptest::collection::vec(1u64..=3, 1..=4),
    ) {
        let mut factors = factors;
        factors.sort_unstable();
        let g = RationalGeneratingFunction {
            numerator: numerator.iter().map(|&c| BigInt::from(c)).collect(),
            denominator_factors: factors.clone(),
        };
        let degree = factors.len() - 1;
        let period = factors.iter().copied().fold(1u64, num_integer::lcm) as usize;
        let values = g.expand(120);
        let qp = fit_values(0, &values, degree, period).unwrap();
        for (n, v) in values.iter().enumerate().skip(qp.valid_from as usize) {
            prop_assert_eq!(qp.eval(n as u64), num_rational::BigRational::from_integer(v.clone()));
        }
        let back = to_generating_function(&qp, &values).unwrap();
        prop_assert_eq!(back.expand(120), values);
    }

    #[test]
    fn ideal_dsl_round_trip(ideal in ideal_strategy(6, 4)) {
        prop_assert_eq!(parse_ideal(&format_ideal(&ideal)).unwrap(), ideal);
    }

    #[test]
    fn graph_dsl_round_trip(g in graph_strategy()) {
        prop_assert_eq!(parse_graph(&format_graph(&g)).unwrap(), g);
    }

    #[test]
    fn locally_bipartite_implies_criterion(g in graph_strategy()) {
        let g = g.without_isolated();
        prop_assume!(g.vertices().len() >= 3);
        if locally_bipartite(&g).unwrap() {
            prop_assert!(prop45_criterion(&g).unwrap().finite);
        }
    }

    #[test]
    fn euler_characteristic_matches_homology(
        facets in proptest::collection::vec(1u32..64, 1..=6),
        p in prop_oneof![Just(0u64), Just(2u64), Just(3u64)],
    ) {
        let k = SimplicialComplex::from_facets(6, &facets).unwrap();
        let field = FieldSpec::from_characteristic(p).unwrap();
        let dims = reduced_homology_dims(&k, field);
        // dims[j] is the dimension of reduced homology in degree j - 1
        let alt: i64 = dims
            .iter()
            .enumerate()
            .map(|(j, &h)| if j % 2 == 1 { h as i64 } else { -(h as i64) })
            .sum();
        prop_assert_eq!(alt, k.reduced_euler_characteristic());
    }
}

#[test]
fn limit_matches_leading_coefficient() {
    let path = edge_ideal(&Graph::path(5));
    let s = length_sequence(&IdealFamily::integral_closure_powers(path.clone()), 1, 16, Q).unwrap();
    let qp = fit_quasipolynomial(&s, 5, 2).unwrap();
    let lead = qp.coefficient(5);
    assert!(lead.iter().all(|c| *c == limit_via_volume(&path, 1).unwrap()));
}

fn two_triangles() -> Graph {
    Graph::new(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap()
}

fn triangle_with_tail() -> Graph {
    Graph::new(6, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5)]).unwrap()
}

#[test]
fn criterion_matches_oracle_on_corpus() {
    let corpus = [
        Graph::path(5),
        Graph::cycle(5),
        Graph::cycle(4),
        two_triangles(),
        triangle_with_tail(),
    ];
    for g in corpus {
        let n = g.dim() as u64;
        let member = IdealFamily::powers(edge_ideal(&g)).member(n).unwrap();
        let oracle = member_total_length(&member, 1, Q).unwrap().is_finite();
        assert_eq!(prop45_criterion(&g).unwrap().finite, oracle, "{}", format_graph(&g));
    }
}

#[test]
fn bipartite_positivity() {
    for g in [Graph::cycle(4), Graph::complete_bipartite(2, 3)] {
        let s = length_sequence(&IdealFamily::powers(edge_ideal(&g)), 1, 10, Q).unwrap();
        assert!(growth_estimate(&s).unwrap().liminf_est > 0.0, "{}", format_graph(&g));
    }
}

#[test]
fn growth_trend_approaches_limit() {
    let path = edge_ideal(&Graph::path(5));
    let s = length_sequence(&IdealFamily::powers(path.clone()), 1, 20, Q).unwrap();
    let g = growth_estimate(&s).unwrap();
    assert_eq!(g.fitted_degree, Some(5));
    let limit = 1.0 / 240.0;
    assert!((g.trend - limit).abs() <= 0.1 * limit, "trend {}", g.trend);
    assert!((g.limsup_est - limit).abs() < 1e-12 && (g.liminf_est - limit).abs() < 1e-12);
}

#[test]
fn eventually_zero_sequence_has_zero_estimates() {
    let i = MonomialIdeal::from_exponents(2, &[&[2, 0], &[0, 3]]).unwrap();
    let s = length_sequence(&IdealFamily::powers(i), 1, 20, Q).unwrap();
    let g = growth_estimate(&s).unwrap();
    assert_eq!((g.limsup_est, g.liminf_est, g.trend), (0.0, 0.0, 0.0));
}
