//! Default tolerances. All are absolute unless a doc comment says otherwise.

/// First-derivative identities (locally conformal product form, `θ`, `F`).
pub const TOL_FIRST: f64 = 1e-8;

/// Curvature-level identities (two derivatives of `A`, `B`).
pub const TOL_CURV: f64 = 1e-7;

/// Defining formula against closed form, first derivatives only.
pub const CLOSED_FORM: f64 = 1e-10;

/// Anything needing a second derivative, e.g. `Γ̃ - Γ` against its closed form.
pub const SECOND_DERIVATIVE: f64 = 1e-9;

/// Algebraic identities that involve no differentiation.
pub const ALGEBRAIC: f64 = 1e-12;

/// Relative scale for non-degeneracy tests of vectors and 2-planes.
pub const DEGENERACY: f64 = 1e-10;

/// `|cos ψ|` below this makes the Ricci-curvature comparison undefined.
pub const COS_PSI_MIN: f64 = 1e-6;

/// Environment variable overriding [`TOL_FIRST`] and [`TOL_CURV`].
///
/// Accepts one number (used for both) or `first,curv`.
pub const TOL_ENV: &str = "QMANIFOLD_TOL";

/// Parses the value of [`TOL_ENV`].
pub fn parse_override(s: &str) -> Result<(f64, f64), String> {
    let parse = |t: &str| -> Result<f64, String> {
        let v: f64 = t
            .trim()
            .parse()
            .map_err(|_| format!("invalid tolerance `{}`", t.trim()))?;
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(format!("tolerance must be positive and finite, got {v}"))
        }
    };
    match s.split_once(',') {
        Some((a, b)) => Ok((parse(a)?, parse(b)?)),
        None => {
            let v = parse(s)?;
            Ok((v, v))
        }
    }
}
