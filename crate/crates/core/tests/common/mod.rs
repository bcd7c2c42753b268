#![allow(dead_code)]

use qmanifold::structures::MetricSpec;

/// Expressions covering every grammar production: literals in each numeric
/// form, all three variables, every binary operator, unary minus, nested and
/// right-associative powers, and every function.
pub const CORPUS: &[&str] = &[
    "2",
    "x1",
    "-x2",
    "x1 + x2 - x3",
    "x1*x2/(1 + x3^2)",
    "2^x1",
    "(1 + x1^2)^2^0.5 + 1.5e-1",
    "-x1^2 + 3",
    "(x1 - x2)*(x2 - x3)*(x3 - x1)",
    "sin(x1)*cos(x2) + 1.25",
    "sinh(x1)*cosh(x2)",
    "tanh(x3 - x1/2)",
    "exp(x1/3 - x2*x3/4)",
    "log(2 + x1^2 + x2^2)",
    "sqrt(1 + x3^2)",
    "cosh(x1)^2",
    "x1^2",
    "1/(2 + sin(x1*x2*x3))",
    "(1 + x1^2)^-1.5",
    "exp(-(x1^2 + x2^2)/4)*cosh(x3)",
    "3.0E0*x1 - .5*x2 + 7.*x3",
    "x1^-2 + x2^3",
];

/// Points inside the domain of every corpus expression.
pub const POINTS: &[[f64; 3]] = &[
    [0.7, 0.3, 0.1],
    [1.3, -0.4, 0.9],
    [-0.6, 1.1, -1.2],
    [1.9, 0.5, -0.3],
];

pub fn spec(a: &str, b: &str) -> MetricSpec {
    MetricSpec::parse(a, b).unwrap()
}

/// Conformally flat round sphere metric (Einstein).
pub fn sphere() -> MetricSpec {
    spec(
        "4/(1 + x1^2 + x2^2 + x3^2)^2",
        "4/(1 + x1^2 + x2^2 + x3^2)^2",
    )
}

/// Round 2-sphere times a line.
pub fn sphere_times_line() -> MetricSpec {
    spec("4/(1 + x1^2 + x2^2)^2", "1")
}

pub fn catenoid() -> MetricSpec {
    spec("cosh(x1)^2", "x1^2")
}
