use proptest::prelude::*;
use rowhorn_core::term::{is_variant, unify_finite, Term, Var, VarSupply};
use rowhorn_core::types::{
    kind_of, normalize, row_unify, type_unify, Kind, KindEnv, TyVar, Type, TypeSubst,
};

const LABELS: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

fn star(id: u32) -> Type {
    Type::Var(TyVar::new(Var::new(id), Kind::Star))
}

fn row_var(id: u32) -> TyVar {
    TyVar::new(Var::new(id), Kind::Row)
}

fn field() -> impl Strategy<Value = Type> {
    prop_oneof![
        Just(Type::int()),
        Just(Type::bool()),
        (0u32..3).prop_map(star),
        (0u32..3).prop_map(|i| Type::list(star(i))),
    ]
}

fn labels() -> impl Strategy<Value = Vec<&'static str>> {
    proptest::sample::subsequence(LABELS.to_vec(), 0..=4).prop_shuffle()
}

fn tail() -> impl Strategy<Value = Option<TyVar>> {
    prop_oneof![Just(None), Just(Some(row_var(10))), Just(Some(row_var(11)))]
}

fn row() -> impl Strategy<Value = Type> {
    (labels(), tail()).prop_flat_map(|(ls, tail)| {
        proptest::collection::vec(field(), ls.len()).prop_map(move |fs| {
            Type::row(ls.iter().copied().zip(fs), tail.clone())
        })
    })
}

fn closed_row() -> impl Strategy<Value = Type> {
    labels().prop_flat_map(|ls| {
        proptest::collection::vec(field(), ls.len())
            .prop_map(move |fs| Type::row(ls.iter().copied().zip(fs), None))
    })
}

/// Reorders the fields of a row spine by the permutation `perm`.
fn permute(row: &Type, perm: &[usize]) -> Type {
    let (fields, tail) = row.row_spine();
    let mut out = tail.clone();
    let n = fields.len();
    let order: Vec<usize> = perm.iter().copied().filter(|&i| i < n).collect();
    for &i in order.iter().rev() {
        let (l, f) = fields[i];
        out = Type::extend(l.clone(), f.clone(), out);
    }
    out
}

fn to_term(t: &Type) -> Term {
    match t {
        Type::Var(v) => Term::Var(v.var.clone()),
        Type::Con(c) => Term::constant(c),
        Type::App(f, a) => Term::app("@", vec![to_term(f), to_term(a)]),
        Type::Arrow(a, b) => Term::app("->", vec![to_term(a), to_term(b)]),
        Type::RowEmpty => Term::constant("{}"),
        Type::RowExtend(l, f, r) => {
            Term::app(&format!("ext:{}", l.name()), vec![to_term(f), to_term(r)])
        }
    }
}

fn applied_pair(s: &TypeSubst, a: &Type, b: &Type) -> Term {
    Term::app(
        "pair",
        vec![to_term(&normalize(&s.apply(a))), to_term(&normalize(&s.apply(b)))],
    )
}

fn plain_type(depth: u32) -> impl Strategy<Value = Type> {
    let leaf = prop_oneof![Just(Type::int()), Just(Type::bool()), (0u32..3).prop_map(star)];
    leaf.prop_recursive(depth, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Type::list),
            (inner.clone(), inner).prop_map(|(a, b)| Type::arrow(a, b)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn row_unifier_is_sound(r1 in row(), r2 in row()) {
        let mut supply = VarSupply::starting_at(100);
        if let Ok(s) = row_unify(&r1, &r2, &mut supply) {
            prop_assert_eq!(normalize(&s.apply(&r1)), normalize(&s.apply(&r2)));
            prop_assert!(s.is_idempotent());
        }
    }

    #[test]
    fn row_unifier_preserves_kinds(r1 in row(), r2 in row()) {
        let mut supply = VarSupply::starting_at(100);
        let env = KindEnv::builtin();
        if let Ok(s) = row_unify(&r1, &r2, &mut supply) {
            for (v, t) in s.iter() {
                prop_assert_eq!(kind_of(&env, t).unwrap(), v.kind.clone());
            }
        }
    }

    #[test]
    fn row_unify_ignores_field_order(
        r1 in row(),
        r2 in row(),
        p in Just((0..4).collect::<Vec<usize>>()).prop_shuffle(),
    ) {
        let shuffled = permute(&r1, &p);
        let a = row_unify(&r1, &r2, &mut VarSupply::starting_at(100));
        let b = row_unify(&shuffled, &r2, &mut VarSupply::starting_at(100));
        prop_assert_eq!(a.is_ok(), b.is_ok());
        if let (Ok(sa), Ok(sb)) = (a, b) {
            prop_assert!(is_variant(&applied_pair(&sa, &r1, &r2), &applied_pair(&sb, &shuffled, &r2)));
        }
    }

    #[test]
    fn disjoint_closed_rows_never_unify(r1 in closed_row(), r2 in closed_row()) {
        let l1: Vec<_> = r1.row_spine().0.into_iter().map(|(l, _)| l.clone()).collect();
        let l2: Vec<_> = r2.row_spine().0.into_iter().map(|(l, _)| l.clone()).collect();
        prop_assume!(!l1.is_empty() || !l2.is_empty());
        prop_assume!(l1.iter().all(|l| !l2.contains(l)));
        prop_assert!(row_unify(&r1, &r2, &mut VarSupply::starting_at(100)).is_err());
    }

    #[test]
    fn normalize_is_idempotent_and_keeps_fields(r in row()) {
        let n = normalize(&r);
        prop_assert_eq!(normalize(&n), n.clone());
        let mut before: Vec<_> = r.row_spine().0.into_iter().map(|(l, t)| (l.clone(), t.clone())).collect();
        let after: Vec<_> = n.row_spine().0.into_iter().map(|(l, t)| (l.clone(), t.clone())).collect();
        before.sort();
        prop_assert_eq!(before, after);
        prop_assert_eq!(r.row_spine().1, n.row_spine().1);
    }

    #[test]
    fn type_unify_agrees_with_term_unify(t1 in plain_type(3), t2 in plain_type(3)) {
        let ty = type_unify(&t1, &t2, &mut VarSupply::starting_at(100));
        let tm = unify_finite(&to_term(&t1), &to_term(&t2));
        prop_assert_eq!(ty.is_ok(), tm.is_some());
        if let (Ok(s), Some(u)) = (ty, tm) {
            let lhs = Term::app("pair", vec![to_term(&s.apply(&t1)), to_term(&s.apply(&t2))]);
            let rhs = u.apply(&Term::app("pair", vec![to_term(&t1), to_term(&t2)]));
            prop_assert!(is_variant(&lhs, &rhs));
        }
    }
}

/// Every assignment of the star variables 0..3 to `Int` or `Bool`.
fn ground_assignments() -> Vec<TypeSubst> {
    let choices = [Type::int(), Type::bool()];
    let mut out = Vec::new();
    for a in &choices {
        for b in &choices {
            for c in &choices {
                out.push(
                    [
                        (TyVar::new(Var::new(0), Kind::Star), a.clone()),
                        (TyVar::new(Var::new(1), Kind::Star), b.clone()),
                        (TyVar::new(Var::new(2), Kind::Star), c.clone()),
                    ]
                    .into_iter()
                    .collect(),
                );
            }
        }
    }
    out
}

fn small_field() -> impl Strategy<Value = Type> {
    prop_oneof![Just(Type::int()), Just(Type::bool()), (0u32..3).prop_map(star)]
}

fn small_closed_row() -> impl Strategy<Value = Type> {
    proptest::sample::subsequence(vec!["a", "b", "c"], 0..=3)
        .prop_shuffle()
        .prop_flat_map(|ls| {
            proptest::collection::vec(small_field(), ls.len())
                .prop_map(move |fs| Type::row(ls.iter().copied().zip(fs), None))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn closed_row_unifier_is_most_general(r1 in small_closed_row(), r2 in small_closed_row()) {
        let thetas = ground_assignments();
        let unifying: Vec<&TypeSubst> = thetas
            .iter()
            .filter(|th| normalize(&th.apply(&r1)) == normalize(&th.apply(&r2)))
            .collect();
        match row_unify(&r1, &r2, &mut VarSupply::starting_at(100)) {
            Ok(s) => {
                prop_assert!(!unifying.is_empty());
                for th in unifying {
                    for id in 0..3 {
                        let v = star(id);
                        prop_assert_eq!(th.apply(&s.apply(&v)), th.apply(&v));
                    }
                }
            }
            Err(_) => prop_assert!(unifying.is_empty()),
        }
    }
}

#[test]
fn open_row_binds_tail_to_residue() {
    let rho = row_var(10);
    let open = Type::row([("name", Type::string())], Some(rho.clone()));
    let wide = Type::row([("name", Type::string()), ("age", Type::int())], None);
    let s = row_unify(&open, &wide, &mut VarSupply::starting_at(100)).unwrap();
    assert_eq!(s.get(&rho), Some(&Type::row([("age", Type::int())], None)));
    let narrow = Type::row([("name", Type::string())], None);
    let s = row_unify(&open, &narrow, &mut VarSupply::starting_at(100)).unwrap();
    assert_eq!(s.get(&rho), Some(&Type::RowEmpty));
}

#[test]
fn shared_tail_with_distinct_labels_is_rejected() {
    let rho = row_var(10);
    let a = Type::row([("a", Type::int())], Some(rho.clone()));
    let b = Type::row([("b", Type::int())], Some(rho));
    assert!(row_unify(&a, &b, &mut VarSupply::starting_at(100)).is_err());
}
