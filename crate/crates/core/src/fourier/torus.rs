use num_integer::Integer;

/// A point of the circle `R/Z`.
///
/// Rational angles keep `‖jθ‖` exact for every integer `j`, which matters
/// near `θ = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Angle {
    /// `num/den` with `0 ≤ num < den`, reduced.
    Rational { num: u64, den: u64 },
    /// A real representative in `[0, 1)`.
    Real(f64),
}

impl Angle {
    pub fn rational(num: i64, den: u64) -> Angle {
        assert!(den > 0, "denominator must be positive");
        let r = num.rem_euclid(den as i64) as u64;
        let g = r.gcd(&den);
        Angle::Rational {
            num: r / g,
            den: den / g,
        }
    }

    pub fn real(x: f64) -> Angle {
        let f = x - x.floor();
        Angle::Real(if f >= 1.0 { 0.0 } else { f })
    }

    pub fn zero() -> Angle {
        Angle::Rational { num: 0, den: 1 }
    }

    /// Representative in `[0, 1)`.
    pub fn value(&self) -> f64 {
        match *self {
            Angle::Rational { num, den } => num as f64 / den as f64,
            Angle::Real(x) => x,
        }
    }

    /// Distance to the nearest integer.
    pub fn norm(&self) -> f64 {
        match *self {
            Angle::Rational { num, den } => num.min(den - num) as f64 / den as f64,
            Angle::Real(x) => x.min(1.0 - x),
        }
    }

    /// Fractional part of `j·θ`.
    pub fn times(&self, j: u64) -> f64 {
        match *self {
            Angle::Rational { num, den } => {
                let r = (j as u128 * num as u128 % den as u128) as u64;
                r as f64 / den as f64
            }
            Angle::Real(x) => {
                let y = j as f64 * x;
                y - y.floor()
            }
        }
    }

    /// `−(a + b)` mod 1.
    pub fn neg_sum(a: Angle, b: Angle) -> Angle {
        match (a, b) {
            (Angle::Rational { num: p1, den: q1 }, Angle::Rational { num: p2, den: q2 }) => {
                let l = q1.lcm(&q2);
                let s = (p1 as u128 * (l / q1) as u128 + p2 as u128 * (l / q2) as u128) % l as u128;
                let neg = ((l as u128 - s) % l as u128) as u64;
                let g = neg.gcd(&l);
                Angle::Rational { num: neg / g, den: l / g }
            }
            _ => Angle::real(-(a.value() + b.value())),
        }
    }
}

/// `θ = (θ₁, θ₂)` on the 2-torus, with `θ₃ = −θ₁ − θ₂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusPoint {
    pub theta1: Angle,
    pub theta2: Angle,
}

impl TorusPoint {
    pub fn new(theta1: Angle, theta2: Angle) -> Self {
        TorusPoint { theta1, theta2 }
    }

    pub fn origin() -> Self {
        TorusPoint::new(Angle::zero(), Angle::zero())
    }

    pub fn theta3(&self) -> Angle {
        Angle::neg_sum(self.theta1, self.theta2)
    }

    pub fn coords(&self) -> [Angle; 3] {
        [self.theta1, self.theta2, self.theta3()]
    }
}
