use num_complex::Complex64;

use crate::circuit::{Control, GateKind};
use crate::synth::{rccx_gates, rcccx_gates};

use super::SimError;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Dense statevector. Basis index bit `n-1-q` holds qubit `q`, so qubit 0 is
/// the most significant bit.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>` on `n` qubits.
    pub fn zero(n: usize) -> Self {
        StateVector::basis(n, 0)
    }

    pub fn basis(n: usize, index: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        StateVector { n, amps }
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Self {
        assert!(amps.len().is_power_of_two(), "amplitude count must be a power of two");
        StateVector { n: amps.len().trailing_zeros() as usize, amps }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    #[inline]
    pub fn bit(&self, q: usize) -> usize {
        1 << (self.n - 1 - q)
    }

    fn control_mask(&self, controls: &[Control]) -> (usize, usize) {
        controls.iter().fold((0, 0), |(mask, val), c| {
            let b = self.bit(c.qubit);
            (mask | b, if c.on { val | b } else { val })
        })
    }

    pub fn x(&mut self, q: usize) {
        let b = self.bit(q);
        for i in 0..self.amps.len() {
            if i & b == 0 {
                self.amps.swap(i, i | b);
            }
        }
    }

    pub fn y(&mut self, q: usize) {
        let b = self.bit(q);
        let i_unit = Complex64::new(0.0, 1.0);
        for i in 0..self.amps.len() {
            if i & b == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | b]);
                self.amps[i] = -i_unit * a1;
                self.amps[i | b] = i_unit * a0;
            }
        }
    }

    pub fn z(&mut self, q: usize) {
        let b = self.bit(q);
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & b != 0 {
                *a = -*a;
            }
        }
    }

    pub fn h(&mut self, q: usize) {
        let b = self.bit(q);
        for i in 0..self.amps.len() {
            if i & b == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | b]);
                self.amps[i] = (a0 + a1) * FRAC_1_SQRT_2;
                self.amps[i | b] = (a0 - a1) * FRAC_1_SQRT_2;
            }
        }
    }

    pub fn phase(&mut self, q: usize, angle: f64) {
        let b = self.bit(q);
        let w = Complex64::from_polar(1.0, angle);
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & b != 0 {
                *a *= w;
            }
        }
    }

    pub fn mcx(&mut self, controls: &[Control], target: usize) {
        let (mask, val) = self.control_mask(controls);
        let t = self.bit(target);
        for i in 0..self.amps.len() {
            if i & t == 0 && i & mask == val {
                self.amps.swap(i, i | t);
            }
        }
    }

    pub fn mcz(&mut self, qubits: &[Control]) {
        let (mask, val) = self.control_mask(qubits);
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & mask == val {
                *a = -*a;
            }
        }
    }

    /// Applies a unitary gate. Measurements are handled by the simulators.
    pub fn apply(&mut self, kind: &GateKind) -> Result<(), SimError> {
        match kind {
            GateKind::PauliX(q) => self.x(*q),
            GateKind::PauliZ(q) => self.z(*q),
            GateKind::Hadamard(q) => self.h(*q),
            GateKind::PhaseRz { qubit, angle } => self.phase(*qubit, *angle),
            GateKind::ControlledX { controls, target } => self.mcx(controls, *target),
            GateKind::ControlledZ { qubits } => self.mcz(qubits),
            GateKind::RelPhaseCCX { qubits, direction } => {
                for g in rccx_gates(*qubits, *direction) {
                    self.apply(&g)?;
                }
            }
            GateKind::RelPhaseCCCX { qubits, direction } => {
                for g in rcccx_gates(*qubits, *direction) {
                    self.apply(&g)?;
                }
            }
            GateKind::Barrier => {}
            GateKind::Measure { .. } => return Err(SimError::HasMeasurement),
        }
        Ok(())
    }

    /// Probability mass with qubit `q` in `|1>`.
    pub fn prob_one(&self, q: usize) -> f64 {
        let b = self.bit(q);
        self.amps.iter().enumerate().filter(|(i, _)| i & b != 0).map(|(_, a)| a.norm_sqr()).sum()
    }

    /// Zeroes every amplitude inconsistent with qubit `q == outcome` (no
    /// renormalisation).
    pub fn project(&mut self, q: usize, outcome: bool) {
        let b = self.bit(q);
        for (i, a) in self.amps.iter_mut().enumerate() {
            if (i & b != 0) != outcome {
                *a = Complex64::new(0.0, 0.0);
            }
        }
    }

    pub fn scale(&mut self, factor: f64) {
        for a in &mut self.amps {
            *a *= factor;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hadamard_then_cx_makes_bell_pair() {
        let mut s = StateVector::zero(2);
        s.h(0);
        s.mcx(&[Control::on(0)], 1);
        let p = s.probabilities();
        assert!((p[0] - 0.5).abs() < 1e-15 && (p[3] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn qubit_zero_is_most_significant() {
        let mut s = StateVector::zero(3);
        s.x(0);
        assert_eq!(s.probabilities()[0b100], 1.0);
    }

    #[test]
    fn open_control() {
        let mut s = StateVector::zero(2);
        s.mcx(&[Control::off(0)], 1);
        assert_eq!(s.probabilities()[0b01], 1.0);
    }

    #[test]
    fn y_is_i_x_z() {
        let mut a = StateVector::zero(1);
        a.h(0);
        a.phase(0, 0.3);
        let mut b = a.clone();
        a.y(0);
        b.z(0);
        b.x(0);
        for (u, v) in a.amplitudes().iter().zip(b.amplitudes()) {
            assert!((u - v * Complex64::new(0.0, 1.0)).norm() < 1e-15);
        }
    }
}
