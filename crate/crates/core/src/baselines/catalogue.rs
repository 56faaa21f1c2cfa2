use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BaselineKind {
    Exact,
    Asymptotic,
    Quadrature,
}

impl fmt::Display for BaselineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BaselineKind::Exact => "exact",
            BaselineKind::Asymptotic => "asymptotic",
            BaselineKind::Quadrature => "quadrature",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BaselineEntry {
    pub name: &'static str,
    pub kind: BaselineKind,
    pub families: &'static str,
    pub anchor: &'static str,
    pub formula: &'static str,
}

const CATALOGUE: [BaselineEntry; 7] = [
    BaselineEntry {
        name: "flat_expected",
        kind: BaselineKind::Exact,
        families: "weyl",
        anchor: "flat chaos zero intensity",
        formula: "area(B) / pi",
    },
    BaselineEntry {
        name: "trig_closed_form",
        kind: BaselineKind::Asymptotic,
        families: "trig",
        anchor: "trigonometric mean count, level u",
        formula: "(b - a)/pi * sqrt(sum c_j^2 j^2 / sum c_j^2) * exp(-u^2/2)",
    },
    BaselineEntry {
        name: "trig_derivative_expected",
        kind: BaselineKind::Asymptotic,
        families: "trig (derivative k)",
        anchor: "zeros of the k-th derivative",
        formula: "sqrt((2k+1)/(2k+3)) * (b - a) * n / pi",
    },
    BaselineEntry {
        name: "kac_gauss_expected",
        kind: BaselineKind::Quadrature,
        families: "kac",
        anchor: "Kac integral for all real zeros",
        formula: "(1/pi) int sqrt(1/(t^2-1)^2 - (n+1)^2 t^(2n)/(t^(2n+2)-1)^2) dt",
    },
    BaselineEntry {
        name: "elliptic_expected",
        kind: BaselineKind::Exact,
        families: "elliptic",
        anchor: "elliptic real zero count",
        formula: "sqrt(n)",
    },
    BaselineEntry {
        name: "taylor_expected",
        kind: BaselineKind::Asymptotic,
        families: "taylor",
        anchor: "Taylor series zeros near the unit circle",
        formula: "sqrt(gamma)/(2 pi) * (-log(1 - r))",
    },
    BaselineEntry {
        name: "kac_rice_expected_count",
        kind: BaselineKind::Quadrature,
        families: "any real family",
        anchor: "Kac-Rice formula with mean",
        formula: "int sqrt(Q(1-rho^2)/P) phi(m/sqrt P) (2 phi(eta) + eta (2 Phi(eta) - 1)) dt",
    },
];

/// Every available baseline, in a fixed order.
pub fn catalogue() -> &'static [BaselineEntry] {
    &CATALOGUE
}
