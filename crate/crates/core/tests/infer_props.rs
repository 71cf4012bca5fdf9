use proptest::prelude::*;
use rowhorn_core::infer::{
    infer, infer_scheme, parse_ml, InferError, InferErrorKind, Scheme, TypeEnv,
};
use rowhorn_core::term::{Var, VarSupply};
use rowhorn_core::types::{kind_of, normalize, Kind, KindEnv, Label, TyVar, Type, TypeNames};

fn scheme(src: &str) -> Result<Scheme, InferError> {
    scheme_in(&KindEnv::builtin(), src)
}

fn scheme_in(env: &KindEnv, src: &str) -> Result<Scheme, InferError> {
    let e = parse_ml(src).unwrap_or_else(|err| panic!("{src}: {err}"));
    infer_scheme(env, &TypeEnv::new(), &e, &mut VarSupply::new())
}

fn printed(src: &str) -> String {
    match scheme(src) {
        Ok(s) => s.to_string(),
        Err(e) => e.to_string(),
    }
}

type ErrorClass<'a> = (&'a str, &'a dyn Fn(&InferErrorKind) -> bool);

const PRINCIPAL: &[(&str, &str)] = &[
    (r"\x. x", "forall a. a -> a"),
    (r"\x. \y. x", "forall a. forall b. a -> b -> a"),
    (
        r"\f. \g. \x. f (g x)",
        "forall a. forall b. forall c. (a -> b) -> (c -> a) -> c -> b",
    ),
    (r"\f. \x. f (f x)", "forall a. (a -> a) -> a -> a"),
    (r"let id = \x. x in id id", "forall a. a -> a"),
    (r#"let id = \x. x in {a = id 1, b = id "s"}"#, "Rec {a : Int, b : String}"),
    (r"\r. r.name", "forall a. forall r:row. Rec {name : a | r} -> a"),
    (r"\r. {r with a = 1}", "forall r:row. Rec r -> Rec {a : Int | r}"),
    (
        r"\r. {x = r.a, y = r.b}",
        "forall a. forall b. forall r:row. Rec {a : a, b : b | r} -> Rec {x : a, y : b}",
    ),
    (
        r#"\r. {{r with a = 1} with b = "s"}"#,
        "forall r:row. Rec r -> Rec {a : Int, b : String | r}",
    ),
    (
        r"\r. {r with a = r.b}",
        "forall a. forall r:row. Rec {b : a | r} -> Rec {a : a, b : a | r}",
    ),
    ("{}", "Rec {}"),
    (r"\x. \y. {fst = x, snd = y}", "forall a. forall b. a -> b -> Rec {fst : a, snd : b}"),
    (r"letrec f = \x. f x in f", "forall a. forall b. a -> b"),
    (r#"(\r. r.x) {x = 1, y = "s"}"#, "Int"),
    (r#"{name = "bob", age = 3}"#, "Rec {age : Int, name : String}"),
];

#[test]
fn principal_types() {
    for (src, expected) in PRINCIPAL {
        assert_eq!(printed(src), *expected, "{src}");
    }
}

#[test]
fn inferred_types_have_kind_star() {
    let env = KindEnv::builtin();
    for (src, _) in PRINCIPAL {
        let s = scheme(src).unwrap();
        assert_eq!(kind_of(&env, &s.body).unwrap(), Kind::Star, "{src}");
    }
}

#[test]
fn printing_and_reparsing_preserves_types() {
    for (src, expected) in PRINCIPAL {
        let again = parse_ml(src).unwrap().to_string();
        assert_eq!(printed(&again), *expected, "{again}");
    }
}

#[test]
fn inference_is_deterministic() {
    for (src, _) in PRINCIPAL {
        assert_eq!(printed(src), printed(src));
    }
}

#[test]
fn error_classes() {
    let occurs = |k: &InferErrorKind| matches!(k, InferErrorKind::OccursViolation { .. });
    let clash = |k: &InferErrorKind| matches!(k, InferErrorKind::TypeClash { duplicate: None, .. });
    let dup = |k: &InferErrorKind| matches!(k, InferErrorKind::TypeClash { duplicate: Some(_), .. });
    let missing = |k: &InferErrorKind| matches!(k, InferErrorKind::MissingLabel(_));
    let unbound = |k: &InferErrorKind| matches!(k, InferErrorKind::UnboundVariable(_));
    let cases: &[ErrorClass] = &[
        (r"\f. f f", &occurs),
        (r"\x. x x", &occurs),
        ("1 2", &clash),
        (r#"{a = 1}.a "s""#, &clash),
        ("{a = 1}.b", &missing),
        (r"(\r. r.name) {age = 3}", &missing),
        ("{{a = 1} with a = 2}", &dup),
        (r"\r. {{r with a = 1} with a = 2}", &dup),
        ("y", &unbound),
        (r"let f = \x. y in f", &unbound),
    ];
    for (src, is_expected) in cases {
        let err = scheme(src).unwrap_err();
        assert!(is_expected(&err.kind), "{src}: {err}");
        assert!(!err.is_kind_error());
    }
}

#[test]
fn kind_errors_come_before_type_errors() {
    let mut int_row = KindEnv::builtin();
    int_row.declare("Int", Kind::Row);
    let mut rec_star = KindEnv::builtin();
    rec_star.declare("Rec", Kind::Star);
    let cases = [
        (&int_row, "1"),
        // Ill-typed as well as ill-kinded: the kind error must win.
        (&int_row, "1 2"),
        (&rec_star, "{}"),
        (&rec_star, r"\r. r.a"),
        (&rec_star, r"\f. f f {}"),
    ];
    for (env, src) in cases {
        let err = scheme_in(env, src).unwrap_err();
        assert!(err.is_kind_error(), "{src}: {err}");
    }
    assert!(scheme_in(&int_row, r#"{name = "x"}"#).is_ok());
}

fn tv(id: u32, kind: Kind) -> TyVar {
    TyVar::new(Var::new(id), kind)
}

#[test]
fn substitution_is_sound_under_reinference() {
    let a = Type::Var(tv(0, Kind::Star));
    let b = Type::Var(tv(1, Kind::Star));
    let rho = Type::Var(tv(2, Kind::Row));
    let gamma = TypeEnv::new()
        .extended("x", Scheme::mono(a.clone()))
        .extended("f", Scheme::mono(Type::arrow(a, b)))
        .extended("r", Scheme::mono(Type::rec(rho)));
    let exprs = [
        "r.name",
        "f x",
        "{r with k = x}",
        "f r.k",
        r#"{f (r.k) with z = "s"}.z"#,
        r"\y. f (y x)",
    ];
    let env = KindEnv::builtin();
    for src in exprs {
        let e = parse_ml(src).unwrap();
        let mut supply = VarSupply::starting_at(10);
        let (s, t) = infer(&env, &gamma, &e, &mut supply).unwrap();
        let gamma2 = gamma.apply(&s);
        let (_, t2) = infer(&env, &gamma2, &e, &mut supply).unwrap();
        let show = |t: &Type| t.display_with(&mut TypeNames::new());
        assert_eq!(show(&t), show(&t2), "{src}");
    }
}

const VALUES: [&str; 5] = ["1", "\"s\"", "{}", r"\x. x", "{q = 1}"];

fn fields() -> impl Strategy<Value = Vec<(&'static str, &'static str)>> {
    proptest::sample::subsequence(vec!["a", "b", "c", "d", "e"], 1..=5).prop_flat_map(|ls| {
        proptest::collection::vec(proptest::sample::select(VALUES.to_vec()), ls.len())
            .prop_map(move |vs| ls.iter().copied().zip(vs).collect())
    })
}

fn literal(fs: &[(&str, &str)]) -> String {
    let body: Vec<String> = fs.iter().map(|(l, v)| format!("{l} = {v}")).collect();
    format!("{{{}}}", body.join(", "))
}

fn extension_chain(fs: &[(&str, &str)]) -> String {
    fs.iter().fold(String::from("r"), |acc, (l, v)| format!("{{{acc} with {l} = {v}}}"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_order_does_not_matter(fs in fields(), perm in Just((0..5).collect::<Vec<usize>>()).prop_shuffle()) {
        let shuffled: Vec<_> = perm.iter().filter(|&&i| i < fs.len()).map(|&i| fs[i]).collect();
        prop_assert_eq!(printed(&literal(&fs)), printed(&literal(&shuffled)));
        let chain = |fs: &[(&str, &str)]| format!(r"\r. {}", extension_chain(fs));
        prop_assert_eq!(printed(&chain(&fs)), printed(&chain(&shuffled)));
        let select = |fs: &[(&str, &str)]| {
            let picks: Vec<String> = fs.iter().map(|(l, _)| format!("{l} = r.{l}")).collect();
            format!(r"\r. {{{}}}", picks.join(", "))
        };
        prop_assert_eq!(printed(&select(&fs)), printed(&select(&shuffled)));
    }

    #[test]
    fn record_types_are_well_kinded(fs in fields()) {
        let s = scheme(&literal(&fs)).unwrap();
        prop_assert_eq!(kind_of(&KindEnv::builtin(), &s.body).unwrap(), Kind::Star);
        let body = normalize(&s.body);
        let (row_fields, tail) = match &body {
            Type::App(_, row) => row.row_spine(),
            other => panic!("not a record: {other}"),
        };
        prop_assert_eq!(tail, &Type::RowEmpty);
        let labels: Vec<&Label> = row_fields.iter().map(|(l, _)| *l).collect();
        let mut sorted = labels.clone();
        sorted.sort();
        prop_assert_eq!(labels, sorted);
    }
}
