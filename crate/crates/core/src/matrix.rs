//! The sixteen Bogoliubov functions at one position in the crystal.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// Transfer functions mapping `(a_s(0), a_i†(0), b_s(0), b_i†(0))` to position `z`.
///
/// ```text
/// a_s(z) = U_s a_s + V_s a_i† + W_s b_s + Q_s b_i†
/// b_s(z) = K_s a_s + L_s a_i† + M_s b_s + N_s b_i†
/// ```
///
/// and the same with `s ↔ i` for the idler operators.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct BogoliubovMatrix<T> {
    pub z: T,
    #[serde(rename = "U_s")]
    pub u_s: Complex<T>,
    #[serde(rename = "V_s")]
    pub v_s: Complex<T>,
    #[serde(rename = "W_s")]
    pub w_s: Complex<T>,
    #[serde(rename = "Q_s")]
    pub q_s: Complex<T>,
    #[serde(rename = "K_s")]
    pub k_s: Complex<T>,
    #[serde(rename = "L_s")]
    pub l_s: Complex<T>,
    #[serde(rename = "M_s")]
    pub m_s: Complex<T>,
    #[serde(rename = "N_s")]
    pub n_s: Complex<T>,
    #[serde(rename = "U_i")]
    pub u_i: Complex<T>,
    #[serde(rename = "V_i")]
    pub v_i: Complex<T>,
    #[serde(rename = "W_i")]
    pub w_i: Complex<T>,
    #[serde(rename = "Q_i")]
    pub q_i: Complex<T>,
    #[serde(rename = "K_i")]
    pub k_i: Complex<T>,
    #[serde(rename = "L_i")]
    pub l_i: Complex<T>,
    #[serde(rename = "M_i")]
    pub m_i: Complex<T>,
    #[serde(rename = "N_i")]
    pub n_i: Complex<T>,
}

/// Entry names in storage order.
pub const ENTRY_NAMES: [&str; 16] = [
    "U_s", "V_s", "W_s", "Q_s", "K_s", "L_s", "M_s", "N_s", "U_i", "V_i", "W_i", "Q_i", "K_i", "L_i", "M_i", "N_i",
];

impl<T: Real> BogoliubovMatrix<T> {
    pub fn identity(z: T) -> Self {
        let o = Complex::new(T::zero(), T::zero());
        let one = Complex::new(T::one(), T::zero());
        Self::from_entries(z, [one, o, o, o, o, o, one, o, one, o, o, o, o, o, one, o])
    }

    /// Builds a matrix from entries in [`ENTRY_NAMES`] order.
    pub fn from_entries(z: T, e: [Complex<T>; 16]) -> Self {
        Self {
            z,
            u_s: e[0],
            v_s: e[1],
            w_s: e[2],
            q_s: e[3],
            k_s: e[4],
            l_s: e[5],
            m_s: e[6],
            n_s: e[7],
            u_i: e[8],
            v_i: e[9],
            w_i: e[10],
            q_i: e[11],
            k_i: e[12],
            l_i: e[13],
            m_i: e[14],
            n_i: e[15],
        }
    }

    /// Assembles the matrix from the four branch solutions: the signal system
    /// yields `(U_s, V_i*, K_s, L_i*)` and `(W_s, Q_i*, M_s, N_i*)`, the idler
    /// system `(U_i, V_s*, K_i, L_s*)` and `(W_i, Q_s*, M_i, N_s*)`.
    pub fn from_branches(
        z: T,
        s1: [Complex<T>; 4],
        s2: [Complex<T>; 4],
        i1: [Complex<T>; 4],
        i2: [Complex<T>; 4],
    ) -> Self {
        Self {
            z,
            u_s: s1[0],
            v_s: i1[1].conj(),
            w_s: s2[0],
            q_s: i2[1].conj(),
            k_s: s1[2],
            l_s: i1[3].conj(),
            m_s: s2[2],
            n_s: i2[3].conj(),
            u_i: i1[0],
            v_i: s1[1].conj(),
            w_i: i2[0],
            q_i: s2[1].conj(),
            k_i: i1[2],
            l_i: s1[3].conj(),
            m_i: i2[2],
            n_i: s2[3].conj(),
        }
    }

    /// Entries in [`ENTRY_NAMES`] order.
    pub fn entries(&self) -> [Complex<T>; 16] {
        [
            self.u_s, self.v_s, self.w_s, self.q_s, self.k_s, self.l_s, self.m_s, self.n_s, self.u_i, self.v_i,
            self.w_i, self.q_i, self.k_i, self.l_i, self.m_i, self.n_i,
        ]
    }

    pub fn max_abs(&self) -> T {
        self.entries().iter().fold(T::zero(), |m, e| m.max(e.norm()))
    }

    /// Largest entrywise deviation, measured relative to `max(|a|, |b|, floor/rel)`.
    ///
    /// Returns `max_k |a_k − b_k| / max(|a_k|, |b_k|)` with differences below
    /// `floor` treated as agreement, so `≤ rel` means agreement within `rel`
    /// relative or `floor` absolute.
    pub fn max_relative_difference(&self, other: &Self, floor: T) -> T {
        self.entries()
            .iter()
            .zip(other.entries().iter())
            .map(|(a, b)| {
                let diff = (a - b).norm();
                if diff <= floor {
                    T::zero()
                } else {
                    diff / a.norm().max(b.norm())
                }
            })
            .fold(T::zero(), T::max)
    }

    /// Signal and idler branches agree up to `tol · max(1, max |entry|)`.
    pub fn branches_coincide(&self, tol: T) -> bool {
        let band = tol * T::one().max(self.max_abs());
        let e = self.entries();
        (0..8).all(|k| (e[k] - e[k + 8]).norm() <= band)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_keys_and_pairs() {
        let m = BogoliubovMatrix::<f64>::identity(0.5);
        let v: serde_json::Value = serde_json::to_value(m).unwrap();
        assert_eq!(v["z"], 0.5);
        assert_eq!(v["U_s"], serde_json::json!([1.0, 0.0]));
        assert_eq!(v["N_i"], serde_json::json!([0.0, 0.0]));
        for name in ENTRY_NAMES {
            assert!(v.get(name).is_some(), "{name}");
        }
        let back: BogoliubovMatrix<f64> = serde_json::from_value(v).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn entries_round_trip() {
        let e: [Complex<f64>; 16] = std::array::from_fn(|k| Complex::new(k as f64, -(k as f64)));
        let m = BogoliubovMatrix::from_entries(1.0, e);
        assert_eq!(m.entries(), e);
        assert_eq!(m.q_s, e[3]);
        assert_eq!(m.k_i, e[12]);
    }
}
