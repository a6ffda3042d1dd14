use std::collections::{HashMap, HashSet};

use parity_search::construction::{
    build_b, build_query_plan_with, extend_to_generating, lemma23_kernel, moment_matrix, PlanConfig,
};
use parity_search::verify::{min_weight_kernel_violation, random_plan, verify_separating};
use parity_search::{build_query_plan, BitVector, FieldSpec, QueryPlan, WorkCap};

/// Separation checked from the query sets alone: count |A_i ∩ X| for every
/// X of size <= d and look for repeated answer tuples.
fn separates_by_intersection(plan: &QueryPlan, d: usize) -> bool {
    fn grow(n: usize, d: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        if cur.len() == d {
            return;
        }
        for j in start..=n {
            cur.push(j);
            grow(n, d, j + 1, cur, out);
            cur.pop();
        }
    }
    let mut sets = Vec::new();
    grow(plan.n(), d, 1, &mut Vec::new(), &mut sets);
    let mut seen = HashSet::new();
    sets.iter().all(|x| {
        let answers: Vec<bool> =
            plan.queries().iter().map(|q| q.iter().filter(|j| x.contains(j)).count() % 2 == 1).collect();
        seen.insert(answers)
    })
}

#[test]
fn plan_15_2_separates() {
    let plan = build_query_plan(15, 2).unwrap();
    assert_eq!(plan.field().unwrap().degree(), 4);
    assert!(plan.f() <= 8);
    assert!(separates_by_intersection(&plan, 2));
    assert!(verify_separating(&plan, 2, WorkCap::DEFAULT).unwrap());
}

#[test]
fn plans_meet_bound_and_separate_across_grid() {
    for d in 1..=3usize {
        for m in 2..=6u32 {
            let top = (1usize << m) - 1;
            let dm = d * m as usize;
            for n in [dm, (dm + top) / 2, top, top.div_ceil(2)] {
                if n < dm || n > top {
                    continue;
                }
                let plan = build_query_plan_with(n, d, &PlanConfig { m: Some(m), ..Default::default() }).unwrap();
                assert!(plan.f() <= dm, "(n, d, m) = ({n}, {d}, {m})");
                assert!(verify_separating(&plan, d, WorkCap::DEFAULT).unwrap(), "({n}, {d}, {m})");
                if n <= 20 {
                    assert!(separates_by_intersection(&plan, d), "({n}, {d}, {m})");
                }
            }
        }
    }
}

#[test]
fn columns_are_moment_vectors() {
    let plan = build_query_plan(40, 3).unwrap();
    let field = plan.field().unwrap();
    let moments = moment_matrix(field, plan.column_elements(), 3);
    assert_eq!(plan.column_elements()[9].value(), 10);
    // every query row lies in the moment row space, and the ranks agree
    let mut stacked = moments.rows().to_vec();
    let r = moments.rank();
    stacked.extend(plan.matrix().rows().iter().cloned());
    assert_eq!(parity_search::BitMatrix::from_rows(40, stacked).unwrap().rank(), r);
    assert_eq!(plan.f(), r);
}

#[test]
fn unique_representability_small_fields() {
    for d in 1..=2usize {
        for m in 2..=5u32 {
            let field = FieldSpec::new(m).unwrap();
            let gen = extend_to_generating(&field, d, &build_b(&field, d)).unwrap();
            let dim = d * m as usize;
            assert_eq!(parity_search::BitMatrix::from_rows(dim, gen.clone()).unwrap().rank(), dim);
            let mut sums: HashMap<BitVector, Vec<usize>> = HashMap::new();
            let mut record = |v: BitVector, who: Vec<usize>| {
                assert!(sums.insert(v, who.clone()).is_none(), "d = {d}, m = {m}: {who:?} collides");
            };
            record(BitVector::zeros(dim), vec![]);
            for i in 0..gen.len() {
                record(gen[i].clone(), vec![i]);
                if d == 2 {
                    for j in i + 1..gen.len() {
                        record(gen[i].xor(&gen[j]), vec![i, j]);
                    }
                }
            }
        }
    }
}

#[test]
fn kernel_has_no_light_vectors() {
    for (n, d) in [(7, 1), (15, 2), (21, 2), (31, 3), (50, 2), (63, 2), (63, 3)] {
        let plan = build_query_plan(n, d).unwrap();
        let ker = lemma23_kernel(&plan);
        assert_eq!(ker.len(), n - plan.f());
        assert_eq!(min_weight_kernel_violation(&plan, 2 * d, WorkCap(100_000_000)).unwrap(), None, "({n}, {d})");
    }
}

#[test]
fn verifier_formulations_agree_on_random_plans() {
    for seed in 0..60u64 {
        let n = 4 + (seed as usize % 9);
        let d = 1 + (seed as usize % 3);
        let f = 3 + (seed as usize % 7);
        let plan = random_plan(n, d, f, seed).unwrap();
        let separating = verify_separating(&plan, d, WorkCap::DEFAULT).unwrap();
        assert_eq!(separating, separates_by_intersection(&plan, d), "seed {seed}");
        let violation = min_weight_kernel_violation(&plan, 2 * d, WorkCap::DEFAULT).unwrap();
        assert_eq!(separating, violation.is_none(), "seed {seed}");
        if let Some(x) = violation {
            assert!(!x.is_empty() && x.len() <= 2 * d);
            let v = x.to_bit_vector(n).unwrap();
            assert!(plan.matrix().matvec(&v).unwrap().is_zero());
        }
    }
}
