use thiserror::Error;

use crate::flow::CrossingLabel;
use crate::model::{Point, SwitchingLine};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("degenerate field: a^2 + b*c = {determinant:e} is not bounded away from zero")]
    DegenerateField { determinant: f64 },

    #[error("non-finite coefficient {name} = {value}")]
    NonFinite { name: &'static str, value: f64 },

    #[error("{layout} layout expects {expected} zone fields, got {got}")]
    FieldCount {
        layout: &'static str,
        expected: usize,
        got: usize,
    },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClosureError {
    #[error("operation requires a {expected} layout")]
    LayoutMismatch { expected: &'static str },

    #[error("outer zone has b = 0; the outer arc cannot be eliminated")]
    OuterZoneDegenerate,

    #[error("center zone has b = 0; the reduced equations are not hyperbolas")]
    InnerZoneDegenerate,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlowError {
    #[error("point ({}, {}) is not on switching line {line:?}", point.x, point.y)]
    NotOnSwitchingLine { point: Point, line: SwitchingLine },

    #[error("switching line {line:?} does not exist in this layout")]
    LineNotInLayout { line: SwitchingLine },

    #[error("the flow from ({}, {}) never reaches x = {target}", start.x, start.y)]
    NeverReaches { start: Point, target: f64 },

    #[error("tangential contact with x = {target} at t = {time}")]
    TangentialContact { target: f64, time: f64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PoincareError {
    #[error("trajectory meets a {label:?} point at ({}, {}) on {line:?}, t = {time}", point.x, point.y)]
    SlidingEncountered {
        label: CrossingLabel,
        point: Point,
        line: SwitchingLine,
        time: f64,
    },

    #[error("event localization stalled at t = {time}")]
    StepUnderflow { time: f64 },

    #[error("no return to the section within t_max = {t_max}")]
    NoReturn { t_max: f64 },

    #[error("({}, {}) is not a crossing point entering the right zone", point.x, point.y)]
    NotEnteringSection { point: Point },

    #[error("displacement has the same sign at both bracket ends: d({lo}) = {d_lo:e}, d({hi}) = {d_hi:e}")]
    BadBracket {
        lo: f64,
        hi: f64,
        d_lo: f64,
        d_hi: f64,
    },

    #[error("invalid integrator settings: {0}")]
    InvalidSettings(&'static str),
}

#[derive(Debug, Error)]
pub enum PlotError {
    #[error("empty plot window [{x_min}, {x_max}] x [{y_min}, {y_max}]")]
    EmptyWindow {
        x_min: f64,
        x_max: f64,
        y_min: f64,
        y_max: f64,
    },

    #[error("nothing to draw: polyline is empty")]
    EmptyPolyline,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Problems with a system-definition document.
#[derive(Debug, Error)]
pub enum InputError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{field}: {message}")]
    Field { field: String, message: String },

    #[error("{field}: {source}")]
    Model {
        field: String,
        #[source]
        source: ModelError,
    },

    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),

    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}
