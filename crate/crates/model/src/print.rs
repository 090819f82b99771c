use std::fmt::Write;

use crate::lps::{LinearProcess, Param, Spec};
use crate::sort::{Sort, SortKind};

fn sort_body(s: &Sort) -> String {
    match &s.kind {
        SortKind::Enum(cs) => format!("{{{}}}", cs.join(", ")),
        SortKind::Bool => "Bool".into(),
        SortKind::Int { lo, hi } => format!("Int({lo}, {hi})"),
        SortKind::List { elem, max } => format!("List({}, {max})", elem.name),
    }
}

fn params(ps: &[Param]) -> String {
    ps.iter()
        .map(|p| format!("{}: {}", p.name, p.sort))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn print_process(proc: &LinearProcess) -> String {
    let mut out = String::new();
    write!(out, "proc {}", proc.name).unwrap();
    if !proc.params.is_empty() {
        write!(out, "({})", params(&proc.params)).unwrap();
    }
    out.push_str(" =\n");
    for (i, s) in proc.summands.iter().enumerate() {
        out.push_str(if i == 0 { "    " } else { "  + " });
        if !s.sums.is_empty() {
            write!(out, "sum {} . ", params(&s.sums)).unwrap();
        }
        if s.guard.as_bool() != Some(true) {
            write!(out, "{} -> ", s.guard).unwrap();
        }
        out.push_str(&s.action);
        if !s.args.is_empty() {
            let args: Vec<String> = s.args.iter().map(|a| a.to_string()).collect();
            write!(out, "({})", args.join(", ")).unwrap();
        }
        let updates: Vec<String> = (0..proc.params.len())
            .filter(|&k| !proc.keeps(s, k))
            .map(|k| format!("{} := {}", proc.params[k].name, s.next[k]))
            .collect();
        write!(out, " . {}({})", proc.name, updates.join(", ")).unwrap();
        out.push_str(if i + 1 == proc.summands.len() { ";\n" } else { "\n" });
    }
    let init: Vec<String> = proc.init.iter().map(|v| v.to_string()).collect();
    write!(out, "init {}({});\n", proc.name, init.join(", ")).unwrap();
    out
}

/// Renders a specification in the input syntax; parsing the result yields an
/// equal [`Spec`].
pub fn print_spec(spec: &Spec) -> String {
    let mut out = String::new();
    for s in &spec.sorts {
        writeln!(out, "sort {} = {};", s.name, sort_body(s)).unwrap();
    }
    out.push_str(&print_process(&spec.process));
    for (name, f) in &spec.formulas {
        writeln!(out, "form {name} = {f};").unwrap();
    }
    out
}
