use ncfgl_core::freealg::FreePoly;
use ncfgl_core::hur::XExpansion;
use ncfgl_core::symfun::QSymElement;
use serde_json::{json, Value};

use crate::{Format, RunConfig};

/// One labelled value in all three output formats.
#[derive(Clone, Debug)]
pub struct Entry {
    pub label: String,
    pub latex_label: String,
    /// May span several lines.
    pub text: String,
    pub latex: String,
    pub json: Value,
}

impl Entry {
    pub fn poly(label: String, latex_label: String, p: &FreePoly) -> Entry {
        Entry { label, latex_label, text: p.to_string(), latex: p.to_latex(), json: p.to_json() }
    }

    pub fn expansion(label: String, latex_label: String, x: &XExpansion) -> Entry {
        let text = x.to_string().trim_end().to_string();
        Entry { label, latex_label, text, latex: x.to_latex(), json: x.to_json() }
    }

    pub fn qsym(label: String, latex_label: String, q: &QSymElement) -> Entry {
        let text = if q.terms.is_empty() {
            "0".to_string()
        } else {
            q.terms.iter().map(|(i, c)| format!("{i}: {c}")).collect::<Vec<_>>().join("\n")
        };
        Entry { label, latex_label, text, latex: q.to_latex(), json: q.to_json() }
    }
}

/// A titled list of entries. A `bare` report with a single entry prints only
/// the value in text format.
#[derive(Clone, Debug)]
pub struct Report {
    pub title: String,
    pub entries: Vec<Entry>,
    pub bare: bool,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Report {
        Report { title: title.into(), entries: Vec::new(), bare: false }
    }

    pub fn single(title: impl Into<String>, entry: Entry) -> Report {
        Report { title: title.into(), entries: vec![entry], bare: true }
    }

    pub fn push(&mut self, e: Entry) {
        self.entries.push(e);
    }
}

pub fn render(report: &Report, cfg: &RunConfig) -> String {
    match cfg.format {
        Format::Text => render_text(report),
        Format::Json => {
            let v = json!({
                "title": report.title,
                "order": cfg.order,
                "convention": cfg.convention.name(),
                "entries": report.entries.iter().map(|e| json!({"name": e.label, "value": e.json})).collect::<Vec<_>>(),
            });
            let mut s = serde_json::to_string_pretty(&v).expect("json values serialize");
            s.push('\n');
            s
        }
        Format::Latex => {
            let mut s = format!("% {}\n\\begin{{align*}}\n", report.title);
            for e in &report.entries {
                s.push_str(&format!("{} &= {} \\\\\n", e.latex_label, e.latex));
            }
            s.push_str("\\end{align*}\n");
            s
        }
    }
}

fn render_text(report: &Report) -> String {
    if report.bare && report.entries.len() == 1 {
        return format!("{}\n", report.entries[0].text);
    }
    let mut s = format!("# {}\n", report.title);
    for e in &report.entries {
        if e.text.contains('\n') {
            s.push_str(&format!("{}:\n", e.label));
            for line in e.text.lines() {
                s.push_str(&format!("  {line}\n"));
            }
        } else {
            s.push_str(&format!("{} = {}\n", e.label, e.text));
        }
    }
    s
}

/// LaTeX for dictionary symbol names such as `phi[1,3](Ups[1,2])*X1^2`.
pub fn symbol_latex(s: &str) -> String {
    let mut out = String::new();
    let mut chars = s.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            'U' if s_starts(&mut chars, "ps[") => out.push_str("\\Upsilon_{"),
            'p' if s_starts(&mut chars, "hi[") => out.push_str("\\varphi_{"),
            'X' | 'Z' => {
                out.push(c);
                out.push_str("_{");
                while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                    out.push(*d);
                    chars.next();
                }
                out.push('}');
            }
            '^' => {
                out.push_str("^{");
                while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                    out.push(*d);
                    chars.next();
                }
                out.push('}');
            }
            ']' => out.push('}'),
            '*' => out.push(' '),
            _ => out.push(c),
        }
    }
    out
}

fn s_starts(chars: &mut std::iter::Peekable<std::str::Chars<'_>>, rest: &str) -> bool {
    let ahead: String = chars.clone().take(rest.len()).collect();
    if ahead == rest {
        for _ in 0..rest.len() {
            chars.next();
        }
        true
    } else {
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbol_names_to_latex() {
        assert_eq!(symbol_latex("phi[1,3](Ups[1,2])"), "\\varphi_{1,3}(\\Upsilon_{1,2})");
        assert_eq!(symbol_latex("2*Ups[1,2]*X1^2 - X3"), "2 \\Upsilon_{1,2} X_{1}^{2} - X_{3}");
    }
}
