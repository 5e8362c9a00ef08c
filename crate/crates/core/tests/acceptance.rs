//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line.

use cohomlen::asymptotics::{
    fit_quasipolynomial, growth_estimate, length_sequence, length_sequence_range, limit_via_volume,
    sequence_generating_function,
};
use cohomlen::cech::cech_oracle;
use cohomlen::graphs::{edge_ideal, prop45_criterion, Graph};
use cohomlen::homology::FieldSpec;
use cohomlen::ideal::{ExponentVector, IdealFamily, MonomialIdeal};
use cohomlen::polyhedra::{
    coconvex_volume, lattice_count, nc_membership, polytope_volume, CoConvexRegion, HalfSpace,
    NewtonPolyhedron,
};
use cohomlen::takayama::{
    finiteness_oracle, graded_dim, support_bound, total_length, GradedPieceQuery, LengthResult,
};
use std::time::Instant;
use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::ToPrimitive;
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;

const Q: FieldSpec = FieldSpec::Rationals;

fn path5() -> MonomialIdeal {
    edge_ideal(&Graph::path(5))
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

struct Outcome {
    pass: bool,
    output: String,
    seconds: f64,
}

fn criterion_1() -> Outcome {
    let s = length_sequence(&IdealFamily::powers(path5()), 1, 8, Q).unwrap();
    let got: Vec<Option<u64>> = s.values.iter().map(|(_, r)| r.value()).collect();
    let want: Vec<Option<u64>> = [0, 0, 1, 5, 16, 40, 86, 166].iter().map(|&v| Some(v)).collect();
    Outcome {
        pass: got == want,
        output: s.to_json().to_string(),
        seconds: 0.0,
    }
}

fn criterion_2() -> Outcome {
    let s = length_sequence(&IdealFamily::powers(path5()), 1, 16, Q).unwrap();
    let qp = fit_quasipolynomial(&s, 5, 2).unwrap();
    let even = vec![q(0, 1), q(1, 60), q(-1, 24), q(-1, 48), q(1, 96), q(1, 240)];
    let mut odd = even.clone();
    odd[0] = q(1, 32);
    let (qp2, g) = sequence_generating_function(&s, 5, 2).unwrap();
    let pass = qp.period == 2
        && qp.polys == vec![even, odd]
        && qp2 == qp
        && g.numerator == vec![BigInt::from(0), 0.into(), 0.into(), 1.into()]
        && g.denominator_factors == vec![1, 1, 1, 1, 1, 2];
    Outcome {
        pass,
        output: format!("{} {}", qp.to_json(), g.to_json()),
        seconds: 0.0,
    }
}

fn criterion_3() -> Outcome {
    let l = limit_via_volume(&path5(), 1).unwrap();
    Outcome {
        pass: l == q(1, 240),
        output: l.to_string(),
        seconds: 0.0,
    }
}

fn random_ideal(runner: &mut TestRunner) -> MonomialIdeal {
    let strat = (1usize..=4).prop_flat_map(|d| {
        (
            proptest::strategy::Just(d),
            proptest::collection::vec(proptest::collection::vec(0i64..=3, d), 1..=5),
        )
    });
    let (d, gens) = strat.new_tree(runner).unwrap().current();
    MonomialIdeal::new(d, gens.into_iter().map(ExponentVector::new)).unwrap()
}

fn criterion_4() -> Outcome {
    let mut runner = TestRunner::deterministic();
    let mut checked = 0usize;
    let mut discrepancies = Vec::new();
    for _ in 0..120 {
        let ideal = random_ideal(&mut runner);
        let d = ideal.dim();
        let m = support_bound(&ideal);
        let lo = vec![-1i64; d];
        let hi = m.entries().to_vec();
        let mut a = lo.clone();
        loop {
            for i in 0..=d {
                let deg = ExponentVector::new(a.clone());
                let t = graded_dim(
                    &GradedPieceQuery {
                        ideal: ideal.clone(),
                        i,
                        degree: deg.clone(),
                    },
                    Q,
                )
                .unwrap();
                let c = cech_oracle(&ideal, i, &deg).unwrap();
                checked += 1;
                if t != c {
                    discrepancies.push(format!("{ideal} i={i} a={deg}: {t} vs {c}"));
                }
            }
            let mut k = 0;
            while k < d {
                if a[k] < hi[k] {
                    a[k] += 1;
                    break;
                }
                a[k] = lo[k];
                k += 1;
            }
            if k == d {
                break;
            }
        }
    }
    Outcome {
        pass: discrepancies.is_empty(),
        output: format!("checked={checked} discrepancies={discrepancies:?}"),
        seconds: 0.0,
    }
}

fn criterion_5() -> Outcome {
    let i1 = MonomialIdeal::from_exponents(2, &[&[1, 5], &[4, 4], &[5, 1]]).unwrap();
    let p = NewtonPolyhedron::of_ideal(&i1).unwrap();
    let mut facets = p.halfspaces().to_vec();
    facets.sort();
    let h = |n: &[i64], b: i64| HalfSpace::new(n.to_vec(), Rational64::from_integer(b)).unwrap();
    let mut want = vec![h(&[1, 0], 1), h(&[0, 1], 1), h(&[1, 1], 6)];
    want.sort();
    let interior = p.halfspaces().iter().all(|hs| {
        let v: i64 = hs.normal().iter().zip([4, 4]).map(|(c, x)| c * x).sum();
        Rational64::from_integer(v) > hs.offset()
    }) && nc_membership(&p, 1, &ExponentVector::new(vec![4, 4]));
    let mut vols = Vec::new();
    let mut simplex_ok = true;
    for d in 2..=6usize {
        let mut pts = vec![vec![Rational64::from_integer(0); d]];
        for i in 0..d {
            let mut e = vec![Rational64::from_integer(0); d];
            e[i] = Rational64::from_integer(1);
            pts.push(e);
        }
        let v = polytope_volume(d, &pts).unwrap();
        let fact: i64 = (1..=d as i64).product();
        simplex_ok &= v == q(1, fact);
        vols.push(v.to_string());
    }
    let facet_strings: Vec<String> = facets.iter().map(|f| f.to_string()).collect();
    Outcome {
        pass: facets == want && interior && simplex_ok,
        output: format!("{facet_strings:?} {vols:?}"),
        seconds: 0.0,
    }
}

fn criterion_6() -> Outcome {
    let e = |v: &[&[i64]]| MonomialIdeal::from_exponents(2, v).unwrap();
    let c = CoConvexRegion::from_ideals(
        2,
        &[e(&[&[1, 5], &[4, 4], &[5, 1]])],
        &[
            e(&[&[1, 8], &[3, 6]]),
            e(&[&[6, 4], &[7, 3]]),
            e(&[&[9, 1], &[10, 0]]),
        ],
    )
    .unwrap();
    let v = coconvex_volume(&c).unwrap();
    let count = lattice_count(&c, 200);
    let vf = v.to_f64().unwrap();
    let ratio = count as f64 / 40000.0;
    Outcome {
        pass: vf > 0.0 && (ratio - vf).abs() <= 0.02 * vf,
        output: format!("volume={v} count={count}"),
        seconds: 0.0,
    }
}

fn two_triangles() -> Graph {
    Graph::new(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap()
}

fn criterion_7() -> Outcome {
    let p5 = prop45_criterion(&Graph::path(5)).unwrap();
    let c5 = prop45_criterion(&Graph::cycle(5)).unwrap();
    let tt = prop45_criterion(&two_triangles()).unwrap();
    let cube = edge_ideal(&two_triangles()).power(3).unwrap();
    let tt_len = total_length(&cube, 1, Q).unwrap();
    let tt_oracle = finiteness_oracle(&cube, 1, Q).unwrap();
    let c4 = IdealFamily::powers(edge_ideal(&Graph::cycle(4)));
    let s = length_sequence_range(&c4, 1, 4, 12, Q).unwrap();
    let ratios: Vec<f64> = s
        .values
        .iter()
        .map(|(n, r)| r.value().map_or(f64::NAN, |v| v as f64 / (*n as f64).powi(4)))
        .collect();
    let max = ratios.iter().copied().fold(0.0, f64::max);
    let positive = ratios.iter().all(|&r| r > 0.0 && r >= 0.5 * max);
    let growth = growth_estimate(&length_sequence(&c4, 1, 12, Q).unwrap()).unwrap();
    let pass = p5.finite
        && c5.finite
        && !tt.finite
        && tt_len == LengthResult::Infinite
        && !tt_oracle
        && positive
        && growth.liminf_est > 0.0;
    Outcome {
        pass,
        output: format!(
            "{} {} {} {:?} {:?} {}",
            serde_json::to_string(&p5).unwrap(),
            serde_json::to_string(&c5).unwrap(),
            serde_json::to_string(&tt).unwrap(),
            tt_len.value(),
            ratios,
            growth.to_json()
        ),
        seconds: 0.0,
    }
}

type Criterion = fn() -> Outcome;

const CRITERIA: [(&str, Criterion); 7] = [
    ("path sequence n=1..8", criterion_1),
    ("path quasi-polynomial and generating function", criterion_2),
    ("volume limit 1/240", criterion_3),
    ("takayama agrees with the cech oracle", criterion_4),
    ("newton polyhedron facets and simplex volumes", criterion_5),
    ("co-convex volume vs lattice count at n=200", criterion_6),
    ("edge ideal criteria and 4-cycle positivity", criterion_7),
];

fn run_all(threads: usize) -> Vec<Outcome> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap();
    pool.install(|| {
        CRITERIA
            .iter()
            .map(|(_, f)| {
                let t = Instant::now();
                let mut o = f();
                o.seconds = t.elapsed().as_secs_f64();
                o
            })
            .collect()
    })
}

fn main() {
    let base = run_all(1);
    let mut all_pass = true;
    for (k, ((name, _), o)) in CRITERIA.iter().zip(&base).enumerate() {
        println!(
            "criterion {}: {} - {} ({:.1}s)",
            k + 1,
            if o.pass { "PASS" } else { "FAIL" },
            name,
            o.seconds
        );
        if !o.pass {
            println!("    output: {}", o.output);
        }
        all_pass &= o.pass;
    }
    let mut identical = true;
    for threads in [4, 8] {
        let other = run_all(threads);
        for (a, b) in base.iter().zip(&other) {
            identical &= a.output == b.output && a.pass == b.pass;
        }
    }
    println!(
        "criterion 8: {} - identical outputs at 1, 4 and 8 threads",
        if identical { "PASS" } else { "FAIL" }
    );
    if !(all_pass && identical) {
        std::process::exit(1);
    }
}
