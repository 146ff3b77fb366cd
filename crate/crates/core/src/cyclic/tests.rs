use super::*;

fn cs(m: u32, r: &[i64]) -> CyclicSet {
    CyclicSet::new(m, r).unwrap()
}

fn opts() -> CyclicOptions {
    CyclicOptions { max_modulus: 24 }
}

/// Residue-by-residue check with explicit representation counts.
fn naive_is_mac(m: u32, c: &[u32], w: &[u32]) -> bool {
    let mut reps = vec![Vec::new(); m as usize];
    for &x in c {
        for &y in w {
            reps[((x + y) % m) as usize].push(x);
        }
    }
    reps.iter().all(|r| !r.is_empty()) && c.iter().all(|x| reps.iter().any(|r| r.len() == 1 && r[0] == *x))
}

#[test]
fn mac_check_matches_naive() {
    for m in 1..=6u32 {
        for c in 1..1u64 << m {
            for w in 1..1u64 << m {
                let (c, w) = (CyclicSet::raw(m, c), CyclicSet::raw(m, w));
                assert_eq!(
                    is_minimal_complement(&c, &w).unwrap(),
                    naive_is_mac(m, &c.residues(), &w.residues())
                );
            }
        }
    }
}

#[test]
fn solve_examples() {
    let a = solve_arises(&CyclicSet::full(7).unwrap(), &opts()).unwrap();
    assert_eq!(a.witness, Some(vec![0]));
    let a = solve_arises(&cs(5, &[0]), &opts()).unwrap();
    assert_eq!(a.witness, Some(vec![0, 1, 2, 3, 4]));
    let a = solve_arises(&cs(4, &[0, 1, 2]), &opts()).unwrap();
    assert!(!a.arises && a.exhausted);
}

#[test]
fn solve_refuses_large_modulus() {
    let r = solve_arises(&cs(30, &[0]), &opts());
    assert!(matches!(r, Err(Error::ModulusTooLarge { m: 30, max: 24 })));
}

#[test]
fn solve_is_translation_and_reflection_invariant() {
    for m in 1..=8u32 {
        for c in 1..1u64 << m {
            let c = CyclicSet::raw(m, c);
            let base = solve_arises(&c, &opts()).unwrap().arises;
            for t in 1..m as i64 {
                assert_eq!(solve_arises(&c.translate(t), &opts()).unwrap().arises, base);
            }
            assert_eq!(solve_arises(&c.negate(), &opts()).unwrap().arises, base);
        }
    }
}

#[test]
fn enumeration_matches_brute_force() {
    for m in 1..=7u32 {
        for w in 1..1u64 << m {
            let w = CyclicSet::raw(m, w);
            let got = enumerate_minimal_complements(&w, &opts()).unwrap();
            let mut want: Vec<CyclicSet> = (1..1u64 << m)
                .map(|c| CyclicSet::raw(m, c))
                .filter(|c| naive_is_mac(m, &c.residues(), &w.residues()))
                .collect();
            want.sort_by_key(|c| (c.len(), c.bits()));
            assert_eq!(got, want, "W={w:?}");
        }
    }
}

#[test]
fn enumeration_examples() {
    let got = enumerate_minimal_complements(&CyclicSet::full(3).unwrap(), &opts()).unwrap();
    assert_eq!(got, vec![cs(3, &[0]), cs(3, &[1]), cs(3, &[2])]);
    let got = enumerate_minimal_complements(&cs(4, &[0, 1]), &opts()).unwrap();
    assert!(got.contains(&cs(4, &[0, 2])) && got.contains(&cs(4, &[1, 3])));
    let got = enumerate_minimal_complements(&cs(5, &[0]), &opts()).unwrap();
    assert_eq!(got, vec![CyclicSet::full(5).unwrap()]);
}

#[test]
fn sumset_bound_examples() {
    let r = check_minimal_sumset_bound(3).unwrap();
    assert!(r.violations.is_empty());
    let k2 = r.extremes.iter().find(|e| e.k == 2).unwrap();
    assert_eq!((k2.max_c, k2.bound_floor), (2, 2));
    let r = check_minimal_sumset_bound(6).unwrap();
    assert!(r.violations.is_empty());
    assert!(r.extremes.iter().find(|e| e.k == 2).unwrap().max_c <= 4);
    let r = check_minimal_sumset_bound(1).unwrap();
    assert!(r.violations.is_empty() && r.extremes.is_empty());
    assert!(check_minimal_sumset_bound(15).is_err());
}

#[test]
fn cayley_small_cases() {
    let d = cayley_domination(2, &opts()).unwrap();
    assert_eq!((d.gamma, d.upper_gamma), (1, 1));
    assert_eq!(cayley_domination(4, &opts()).unwrap().gamma, 2);
    assert!(cayley_domination(1, &opts()).is_err());
}

#[test]
fn cayley_witnesses_are_minimal_complements() {
    for n in 2..=16 {
        let d = cayley_domination(n, &opts()).unwrap();
        let p = unit_set(n).unwrap();
        for wit in [&d.gamma_witness, &d.upper_gamma_witness] {
            let c = cs(n, &wit.iter().map(|&x| x as i64).collect::<Vec<_>>());
            assert!(is_minimal_complement(&c, &p).unwrap(), "n={n}");
        }
    }
}

#[test]
fn quotient_lift_examples() {
    let c = EventualSet::periodic(2, &[0]).unwrap();
    let ans = solve_arises(&cs(2, &[0]), &opts()).unwrap();
    let lift = quotient_lift(&c, &ans).unwrap();
    assert_eq!(lift.w, vec![0, 1]);
    assert!(lift.report.certified());

    let c = EventualSet::periodic(3, &[0, 1]).unwrap();
    let ans = solve_arises(&cs(3, &[0, 1]), &opts()).unwrap();
    let lift = quotient_lift(&c, &ans).unwrap();
    assert!(lift.report.certified());
    assert_eq!(lift.w.len(), ans.witness.unwrap().len());

    let z = EventualSet::periodic(1, &[0]).unwrap();
    let ans = solve_arises(&CyclicSet::full(1).unwrap(), &opts()).unwrap();
    assert_eq!(quotient_lift(&z, &ans).unwrap().w, vec![0]);

    let not_periodic = EventualSet::finite(&[0, 1]);
    assert!(quotient_lift(&not_periodic, &ans).is_err());
}
