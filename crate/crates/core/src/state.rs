//! Conserved state vectors.
//!
//! Both target systems share the layout `(h, hu, hv)`. The Saint-Venant
//! system simply never populates `hv`; keeping a fixed-size vector avoids
//! generics throughout the solver while the model decides how many
//! components are physically active.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// Conserved variables at one degree of freedom: water depth `h`,
/// momentum `hu`, and transverse momentum `hv` (rotating system only).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct State {
    pub h: f64,
    pub hu: f64,
    pub hv: f64,
}

impl State {
    pub const ZERO: State = State {
        h: 0.0,
        hu: 0.0,
        hv: 0.0,
    };

    #[inline]
    pub const fn new(h: f64, hu: f64, hv: f64) -> Self {
        State { h, hu, hv }
    }

    #[inline]
    pub fn comp(&self, i: usize) -> f64 {
        match i {
            0 => self.h,
            1 => self.hu,
            2 => self.hv,
            _ => panic!("state component index out of range"),
        }
    }

    #[inline]
    pub fn is_finite(&self) -> bool {
        self.h.is_finite() && self.hu.is_finite() && self.hv.is_finite()
    }

    /// Componentwise absolute maximum against another state.
    #[inline]
    pub fn max_abs_diff(&self, other: &State) -> f64 {
        (self.h - other.h)
            .abs()
            .max((self.hu - other.hu).abs())
            .max((self.hv - other.hv).abs())
    }
}

impl Add for State {
    type Output = State;
    #[inline]
    fn add(self, rhs: State) -> State {
        State::new(self.h + rhs.h, self.hu + rhs.hu, self.hv + rhs.hv)
    }
}

impl AddAssign for State {
    #[inline]
    fn add_assign(&mut self, rhs: State) {
        self.h += rhs.h;
        self.hu += rhs.hu;
        self.hv += rhs.hv;
    }
}

impl Sub for State {
    type Output = State;
    #[inline]
    fn sub(self, rhs: State) -> State {
        State::new(self.h - rhs.h, self.hu - rhs.hu, self.hv - rhs.hv)
    }
}

impl Neg for State {
    type Output = State;
    #[inline]
    fn neg(self) -> State {
        State::new(-self.h, -self.hu, -self.hv)
    }
}

impl Mul<State> for f64 {
    type Output = State;
    #[inline]
    fn mul(self, rhs: State) -> State {
        State::new(self * rhs.h, self * rhs.hu, self * rhs.hv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let a = State::new(1.0, 2.0, 3.0);
        let b = State::new(0.5, -1.0, 0.0);
        let s = a + b;
        assert_eq!(s, State::new(1.5, 1.0, 3.0));
        assert_eq!(a - b, State::new(0.5, 3.0, 3.0));
        assert_eq!(2.0 * a, State::new(2.0, 4.0, 6.0));
        assert_eq!(a.comp(0), 1.0);
        assert_eq!(a.comp(2), 3.0);
    }
}
