//! Dense fixed-size arrays for rank ≤ 4 tensors over a 3-dimensional chart.
//!
//! Index order follows the conventions in `docs/CONVENTIONS.md`: the first
//! array index of a Christoffel array is the upper index.

pub type Vec3 = [f64; 3];
pub type Mat3 = [[f64; 3]; 3];
pub type Tensor3 = [[[f64; 3]; 3]; 3];
pub type Tensor4 = [[[[f64; 3]; 3]; 3]; 3];

pub const ZERO3: Tensor3 = [[[0.0; 3]; 3]; 3];
pub const ZERO4: Tensor4 = [[[[0.0; 3]; 3]; 3]; 3];

pub fn identity() -> Mat3 {
    diag([1.0, 1.0, 1.0])
}

pub fn diag(d: Vec3) -> Mat3 {
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        m[i][i] = d[i];
    }
    m
}

pub fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut c = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

pub fn mat_vec(a: &Mat3, v: &Vec3) -> Vec3 {
    [0, 1, 2].map(|i| (0..3).map(|k| a[i][k] * v[k]).sum())
}

/// `vᵀ m w`.
pub fn bilinear(m: &Mat3, v: &Vec3, w: &Vec3) -> f64 {
    let mut s = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            s += v[i] * m[i][j] * w[j];
        }
    }
    s
}

/// Full contraction `mᵢⱼ nⁱʲ`.
pub fn trace_with(m: &Mat3, n: &Mat3) -> f64 {
    let mut s = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            s += m[i][j] * n[i][j];
        }
    }
    s
}

pub fn det(m: &Mat3) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

pub fn max_abs_mat(m: &Mat3) -> f64 {
    m.iter().flatten().fold(0.0, |acc, v| acc.max(v.abs()))
}

pub fn max_abs3(t: &Tensor3) -> f64 {
    t.iter()
        .flatten()
        .flatten()
        .fold(0.0, |acc, v| acc.max(v.abs()))
}

pub fn max_abs4(t: &Tensor4) -> f64 {
    t.iter()
        .flatten()
        .flatten()
        .flatten()
        .fold(0.0, |acc, v| acc.max(v.abs()))
}

pub fn max_diff_mat(a: &Mat3, b: &Mat3) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            m = m.max((a[i][j] - b[i][j]).abs());
        }
    }
    m
}

pub fn max_diff3(a: &Tensor3, b: &Tensor3) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                m = m.max((a[i][j][k] - b[i][j][k]).abs());
            }
        }
    }
    m
}

pub fn max_diff4(a: &Tensor4, b: &Tensor4) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    m = m.max((a[i][j][k][l] - b[i][j][k][l]).abs());
                }
            }
        }
    }
    m
}

/// `t(x, y, z, u)` for an all-lower rank-4 array.
pub fn eval4(t: &Tensor4, x: &Vec3, y: &Vec3, z: &Vec3, u: &Vec3) -> f64 {
    let mut s = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    s += t[i][j][k][l] * x[i] * y[j] * z[k] * u[l];
                }
            }
        }
    }
    s
}

/// Scale every index of a rank-4 array by per-direction factors.
pub fn scale4(t: &Tensor4, s: &Vec3) -> Tensor4 {
    let mut out = ZERO4;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    out[i][j][k][l] = t[i][j][k][l] * s[i] * s[j] * s[k] * s[l];
                }
            }
        }
    }
    out
}

pub fn scale3(t: &Tensor3, s: &Vec3) -> Tensor3 {
    let mut out = ZERO3;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                out[i][j][k] = t[i][j][k] * s[i] * s[j] * s[k];
            }
        }
    }
    out
}

pub fn scale2(m: &Mat3, s: &Vec3) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = m[i][j] * s[i] * s[j];
        }
    }
    out
}
