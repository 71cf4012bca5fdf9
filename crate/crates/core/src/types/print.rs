use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;

use super::{normalize, Kind, Type};

/// Names type variables in first-request order: ⋆-kinded (and higher)
/// variables get `a`, `b`, ..., `z`, `a1`, ...; row variables get `r`,
/// `r1`, `r2`, ...
#[derive(Clone, Debug, Default)]
pub struct TypeNames {
    names: BTreeMap<u32, String>,
    types: usize,
    rows: usize,
}

impl TypeNames {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn name(&mut self, id: u32, kind: &Kind) -> &str {
        if !self.names.contains_key(&id) {
            let name = if *kind == Kind::Row {
                let n = self.rows;
                self.rows += 1;
                if n == 0 {
                    String::from("r")
                } else {
                    format!("r{n}")
                }
            } else {
                let n = self.types;
                self.types += 1;
                let letter = (b'a' + (n % 26) as u8) as char;
                match n / 26 {
                    0 => format!("{letter}"),
                    k => format!("{letter}{k}"),
                }
            };
            self.names.insert(id, name);
        }
        &self.names[&id]
    }
}

pub(super) fn type_to_string(ty: &Type, names: &mut TypeNames) -> String {
    let mut out = String::new();
    write_type(&normalize(ty), names, &mut out);
    out
}

fn write_type(ty: &Type, names: &mut TypeNames, out: &mut String) {
    match ty {
        Type::Arrow(a, b) => {
            write_operand(a, matches!(**a, Type::Arrow(..)), names, out);
            out.push_str(" -> ");
            write_type(b, names, out);
        }
        Type::App(f, a) => {
            write_type(f, names, out);
            out.push(' ');
            write_operand(a, matches!(**a, Type::Arrow(..) | Type::App(..)), names, out);
        }
        Type::Var(v) => out.push_str(names.name(v.id(), &v.kind)),
        Type::Con(c) => out.push_str(c),
        Type::RowEmpty => out.push_str("{}"),
        Type::RowExtend(..) => {
            let (fields, tail) = ty.row_spine();
            out.push('{');
            for (i, (l, t)) in fields.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(l.name());
                out.push_str(" : ");
                write_type(t, names, out);
            }
            if !matches!(tail, Type::RowEmpty) {
                out.push_str(" | ");
                write_type(tail, names, out);
            }
            out.push('}');
        }
    }
}

fn write_operand(ty: &Type, parens: bool, names: &mut TypeNames, out: &mut String) {
    if parens {
        out.push('(');
        write_type(ty, names, out);
        out.push(')');
    } else {
        write_type(ty, names, out);
    }
}
