use std::fmt::Write;
use std::path::Path;

use emphase_core::discourse::{parse_script, replay, Givenness, Replay};
use emphase_core::lexicon::SelectionError;
use emphase_core::scheme::parse_binding;
use emphase_core::sexpr::Sexp;
use emphase_core::{
    decide_emphasis_q, match_verbs, select_process_type, serialize_spl, Bundle, EmphasisSource,
    Generated, SemanticForm,
};

use crate::{read_file, Failure, GenerateArgs};

fn line(out: &mut String, text: impl std::fmt::Display) {
    writeln!(out, "{text}").expect("writing to a string");
}

pub fn frame(bundle: &Bundle, structured: bool) -> Result<String, Failure> {
    let frame = bundle.frame()?;
    let mut out = String::new();
    if structured {
        line(&mut out, frame.to_sexp(&bundle.field.name));
    } else {
        for (v, r) in frame.iter() {
            line(&mut out, format!("{:<6} {r}", v.to_string()));
        }
    }
    Ok(out)
}

fn process_type(form: &SemanticForm, bundle: &Bundle) -> String {
    match select_process_type(form, &bundle.upper_model) {
        Ok(sel) => sel.um_type,
        Err(SelectionError::Unclassified(_)) => "unclassified".into(),
        Err(SelectionError::Ambiguous(types)) => format!("ambiguous({})", types.join(",")),
    }
}

fn or_dash(s: String) -> String {
    if s.is_empty() {
        "-".into()
    } else {
        s
    }
}

pub fn forms(bundle: &Bundle, structured: bool) -> Result<String, Failure> {
    let atlas = bundle.atlas()?;
    let mut out = String::new();
    if !structured {
        line(&mut out, "emphasis | blocked | realization | verbs | process type");
    }
    for form in &atlas.forms {
        let verbs: Vec<&str> = match_verbs(form, &bundle.lexicon)
            .into_iter()
            .map(|v| v.lemma.as_str())
            .collect();
        let um = process_type(form, bundle);
        if structured {
            let mut items = form.to_sexp().as_list().expect("form term").to_vec();
            let mut v = vec![Sexp::atom("verbs")];
            v.extend(verbs.iter().map(|l| Sexp::string(*l)));
            items.push(Sexp::list(v));
            items.push(Sexp::list(vec![Sexp::atom("um"), Sexp::atom(um)]));
            line(&mut out, Sexp::list(items));
        } else {
            line(
                &mut out,
                format!(
                    "{} | {} | {} | {} | {um}",
                    form.emphasis,
                    or_dash(form.blocking.to_string()),
                    form.realization,
                    or_dash(verbs.join(" ")),
                ),
            );
        }
    }
    if structured {
        line(
            &mut out,
            Sexp::list(vec![
                Sexp::atom("count"),
                Sexp::atom(atlas.forms.len().to_string()),
                Sexp::list(vec![Sexp::atom("skipped"), Sexp::atom(atlas.skipped.to_string())]),
            ]),
        );
    } else {
        line(
            &mut out,
            format!(
                "{} forms ({} candidate pairs without a case assignment)",
                atlas.forms.len(),
                atlas.skipped
            ),
        );
    }
    Ok(out)
}

fn load_replay(script: &Path) -> Result<Replay, Failure> {
    let text = read_file(script)?;
    let script = parse_script(&text).map_err(|e| Failure::input(format!("{}: {e}", script.display())))?;
    replay(&script).map_err(|e| Failure::input(format!("planning: {e}")))
}

fn run_generate<'b>(bundle: &'b Bundle, args: &GenerateArgs) -> Result<Generated<'b>, Failure> {
    let text = read_file(&args.bindings)?;
    let binding =
        parse_binding(&text).map_err(|e| Failure::input(format!("{}: {e}", args.bindings.display())))?;
    let replay = args.script.as_deref().map(load_replay).transpose()?;
    let source = match (&replay, args.emphasis_q) {
        (Some(r), _) => EmphasisSource::Discourse(r),
        (None, Some(q)) => EmphasisSource::Flag(q.into()),
        (None, None) => EmphasisSource::None,
    };
    Ok(bundle.generate(&args.verb, &binding, source)?)
}

pub fn spl(bundle: &Bundle, args: &GenerateArgs, _structured: bool) -> Result<String, Failure> {
    let g = run_generate(bundle, args)?;
    Ok(format!("{}\n", serialize_spl(&g.spl)))
}

pub fn realize(bundle: &Bundle, args: &GenerateArgs, structured: bool) -> Result<String, Failure> {
    let g = run_generate(bundle, args)?;
    Ok(if structured {
        format!("{}\n", Sexp::list(vec![Sexp::atom("sentence"), Sexp::string(g.sentence)]))
    } else {
        format!("{}\n", g.sentence)
    })
}

pub fn generate(bundle: &Bundle, args: &GenerateArgs, structured: bool) -> Result<String, Failure> {
    let g = run_generate(bundle, args)?;
    let spl = serialize_spl(&g.spl);
    Ok(if structured {
        let spl_term = emphase_core::sexpr::read_one(&spl).expect("serialized SPL reads back");
        format!(
            "{}\n",
            Sexp::list(vec![
                Sexp::atom("generated"),
                Sexp::list(vec![Sexp::atom("verb"), Sexp::string(g.verb.lemma.clone())]),
                Sexp::list(vec![Sexp::atom("spl"), spl_term]),
                Sexp::list(vec![Sexp::atom("sentence"), Sexp::string(g.sentence)]),
            ])
        )
    } else {
        format!("{spl}\n{}\n", g.sentence)
    })
}

pub fn plan(script: &Path, referent: Option<&str>, structured: bool) -> Result<String, Failure> {
    let r = load_replay(script)?;
    let mut out = String::new();
    let mut terms = vec![Sexp::atom("plan")];
    for (i, state) in r.trace.iter().enumerate() {
        let mentioned: Vec<&str> = state.mentioned.iter().map(String::as_str).collect();
        let hypertheme = state.hypertheme.as_deref().unwrap_or("-");
        if structured {
            let mut m = vec![Sexp::atom("given")];
            m.extend(mentioned.iter().map(|x| Sexp::atom(*x)));
            terms.push(Sexp::list(vec![
                Sexp::atom("state"),
                Sexp::atom((i + 1).to_string()),
                Sexp::list(m),
                Sexp::list(vec![Sexp::atom("hypertheme"), Sexp::atom(hypertheme)]),
            ]));
        } else {
            line(
                &mut out,
                format!("after {}: given {}; hypertheme {hypertheme}", i + 1, mentioned.join(" ")),
            );
        }
    }
    let referents: Vec<String> = match referent {
        Some(x) => vec![x.to_string()],
        None => r.state.mentioned.iter().cloned().chain(r.focus.iter().cloned()).collect(),
    };
    let mut seen = Vec::new();
    for name in referents {
        if seen.contains(&name) {
            continue;
        }
        let status = r.status_of(&name);
        let q = decide_emphasis_q(&name, &status).map_err(|e| Failure::input(format!("planning: {e}")))?;
        if structured {
            let yes_no = |b: bool| Sexp::atom(if b { "yes" } else { "no" });
            let given = match status.givenness {
                Givenness::Given => "given",
                Givenness::New => "new",
            };
            terms.push(Sexp::list(vec![
                Sexp::atom("status"),
                Sexp::atom(name.clone()),
                Sexp::list(vec![Sexp::atom("givenness"), Sexp::atom(given)]),
                Sexp::list(vec![Sexp::atom("hypertheme"), yes_no(status.is_hypertheme)]),
                Sexp::list(vec![Sexp::atom("focus"), yes_no(status.in_focus)]),
                Sexp::list(vec![Sexp::atom("emphasis-q"), Sexp::atom(q.name())]),
            ]));
        } else {
            line(&mut out, format!("{name}: {status} -> {q}"));
        }
        seen.push(name);
    }
    if structured {
        line(&mut out, Sexp::list(terms));
    }
    Ok(out)
}

pub fn check(bundle: &Bundle, structured: bool) -> Result<String, Failure> {
    let problems = bundle.check();
    if !problems.is_empty() {
        let code = if problems.iter().any(|p| p.rule_gap) { 2 } else { 1 };
        let listing: Vec<String> = problems.iter().map(|p| p.to_string()).collect();
        return Err(Failure {
            code,
            message: format!("{} problem(s)\n{}", problems.len(), listing.join("\n")),
        });
    }
    let frame = bundle.frame()?;
    let atlas = bundle.atlas()?;
    let verbs = bundle.lexicon.entries.len();
    Ok(if structured {
        let count = |k: &str, n: usize| Sexp::list(vec![Sexp::atom(k), Sexp::atom(n.to_string())]);
        format!(
            "{}\n",
            Sexp::list(vec![
                Sexp::atom("ok"),
                Sexp::atom(bundle.field.name.clone()),
                count("roles", frame.len()),
                count("forms", atlas.forms.len()),
                count("verbs", verbs),
            ])
        )
    } else {
        format!(
            "ok: {} with {} roles, {} semantic forms, {verbs} lexicon entries\n",
            bundle.field.name,
            frame.len(),
            atlas.forms.len()
        )
    })
}
