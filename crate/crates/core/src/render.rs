//! Text emitters: LaTeX rendering of the equation families in the display
//! style of the source identities, and CSV layouts for loci and residual
//! tables.

use crate::crossbreed::{FactorRef, FamilyReport, MetaEquation};
use crate::levelset::LocusPoint;
use crate::specfun::FunctionTag;
use std::fmt::Write;

fn latex_factor(f: &FactorRef) -> String {
    let mult = if f.n == 1 {
        String::new()
    } else {
        f.n.to_string()
    };
    let arg = format!("{mult}s_{{{}}}^{{{}}}", f.slot, f.n);
    match f.tag {
        FunctionTag::Zeta => format!("|\\zeta({arg})|"),
        FunctionTag::Gamma => format!("|\\Gamma({arg})|"),
        FunctionTag::JacobiCn { .. } => format!("|\\mathrm{{cn}}({arg},k)|"),
        FunctionTag::BesselJ { p } => format!("|J_{{{p}}}({arg})|"),
    }
}

fn latex_term(term: &[FactorRef]) -> String {
    term.iter().map(latex_factor).collect::<Vec<_>>().join("")
}

/// One crossbred identity in display style.
pub fn latex_meta(eq: &MetaEquation) -> String {
    format!(
        "{}+{} = {}+{}",
        latex_term(&eq.lhs_factors[0]),
        latex_term(&eq.lhs_factors[1]),
        latex_term(&eq.rhs_factors[0]),
        latex_term(&eq.rhs_factors[1]),
    )
}

/// A whole family as an aligned LaTeX block, one equation per pair.
pub fn latex_family(report: &FamilyReport) -> String {
    let mut out = String::new();
    out.push_str("\\begin{align*}\n");
    for eq in &report.equations {
        let _ = writeln!(
            out,
            "% {} x {}  (class {})\n& {} \\\\",
            eq.parents[0],
            eq.parents[1],
            eq.class,
            latex_meta(eq)
        );
    }
    out.push_str("\\end{align*}\n");
    out
}

/// Locus points (or polylines) as CSV with the fixed column layout
/// tag,n,c,re,im,achieved.
pub fn locus_csv(points: &[LocusPoint]) -> String {
    let mut out = String::from("tag,n,c,re,im,achieved\n");
    for p in points {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            p.tag.symbol(),
            p.n,
            p.target_c,
            p.s.re,
            p.s.im,
            p.achieved
        );
    }
    out
}

/// Residual table of a generated family.
pub fn residual_csv(report: &FamilyReport) -> String {
    let mut out = String::from("scheme,row_a,row_b,class,lhs,rhs,residual\n");
    for eq in &report.equations {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            eq.parents[0].scheme,
            eq.parents[0].row,
            eq.parents[1].row,
            eq.class,
            eq.lhs_value,
            eq.rhs_value,
            eq.residual
        );
    }
    out
}
