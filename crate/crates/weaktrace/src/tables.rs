//! CSV tables. Every writer renders into memory first so a failing run never
//! leaves a truncated file behind.
//!
//! Floats use Rust's shortest round-trip formatting, '.' decimals and '\n'
//! line endings. The weak-value table carries one leading `#` metadata line.

use weaktrace_core::dynamics::{ScalingFit, SpectrumReport};
use weaktrace_core::{GridField, TraceReport, WeakValueReport};

fn writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    let bytes = w.into_inner().expect("writing to memory cannot fail");
    String::from_utf8(bytes).expect("csv output is utf-8")
}

/// Shortest round-trip text; exponent form outside `[1e-4, 1e15)`.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) || !a.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// `mirror,re,im,abs`, preceded by `# phi_c=…,z_d=…,overlap_re=…,overlap_im=…`.
pub fn weak_values_csv(rep: &WeakValueReport) -> String {
    let mut out = format!(
        "# phi_c={},z_d={},overlap_re={},overlap_im={}\n",
        opt(rep.phi_c),
        opt(rep.z_d),
        num(rep.overlap.re),
        num(rep.overlap.im)
    );
    let mut w = writer();
    w.write_record(["mirror", "re", "im", "abs"]).unwrap();
    for (tag, v) in &rep.values {
        w.write_record([tag.clone(), num(v.re), num(v.im), num(v.norm())]).unwrap();
    }
    out.push_str(&finish(w));
    out
}

/// One-sided spectrum: `frequency,re,im,abs`.
pub fn spectrum_csv(rep: &SpectrumReport) -> String {
    let mut w = writer();
    w.write_record(["frequency", "re", "im", "abs"]).unwrap();
    for b in rep.one_sided() {
        w.write_record([num(b.frequency), num(b.value.re), num(b.value.im), num(b.value.norm())]).unwrap();
    }
    finish(w)
}

/// Drive and intermodulation lines: `line,frequency,re,im,abs,signed`.
/// `signed` is the in-phase drive amplitude for mirror lines and empty for sidebands.
pub fn lines_csv(rep: &SpectrumReport) -> String {
    let mut w = writer();
    w.write_record(["line", "frequency", "re", "im", "abs", "signed"]).unwrap();
    for (tag, p) in &rep.peaks {
        w.write_record([tag.clone(), num(p.frequency), num(p.value.re), num(p.value.im), num(p.magnitude()), num(p.signed)])
            .unwrap();
    }
    for s in &rep.sidebands {
        w.write_record([s.label.clone(), num(s.frequency), num(s.value.re), num(s.value.im), num(s.value.norm()), String::new()])
            .unwrap();
    }
    finish(w)
}

/// `mirror,strength,exponent,residual`; mirror rows first, then intermodulation
/// lines (`fits` supplies their exponents, if any).
pub fn traces_csv(rep: &TraceReport, line_fits: &[(String, ScalingFit)]) -> String {
    let mut w = writer();
    w.write_record(["mirror", "strength", "exponent", "residual"]).unwrap();
    for (tag, e) in &rep.mirrors {
        w.write_record([tag.clone(), num(e.strength), opt(e.exponent), opt(e.residual)]).unwrap();
    }
    for (label, value) in &rep.lines {
        let fit = line_fits.iter().find(|(l, _)| l == label).map(|(_, f)| f);
        w.write_record([label.clone(), num(*value), opt(fit.map(|f| f.exponent)), opt(fit.map(|f| f.residual))])
            .unwrap();
    }
    finish(w)
}

/// Generic numeric table with a header row.
pub fn table_csv(header: &[String], rows: &[Vec<f64>]) -> String {
    let mut w = writer();
    w.write_record(header).unwrap();
    for r in rows {
        w.write_record(r.iter().map(|&x| num(x))).unwrap();
    }
    finish(w)
}

/// Debug dump of a sampled field: `x,re,im`.
pub fn grid_csv(field: &GridField) -> String {
    let rows: Vec<Vec<f64>> =
        field.samples.iter().enumerate().map(|(i, s)| vec![field.x(i), s.re, s.im]).collect();
    table_csv(&["x".into(), "re".into(), "im".into()], &rows)
}
