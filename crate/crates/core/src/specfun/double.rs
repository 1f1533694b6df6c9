//! Double-double scalar.
//!
//! Addition, multiplication and square root come from `twofloat`. Its
//! double-double quotient forms the residual `1 - b·(1/b)` without a fused
//! multiply-add and is only about as accurate as `f64`, so division by a
//! double-double is redone here by long division.

use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use twofloat::TwoFloat;

#[derive(Clone, Copy, Default, PartialEq, PartialOrd)]
pub struct Dd(TwoFloat);

impl Dd {
    pub const PI: Dd = Dd(twofloat::consts::PI);

    pub fn hi(self) -> f64 {
        self.0.hi()
    }

    pub fn lo(self) -> f64 {
        self.0.lo()
    }

    pub fn sqrt(self) -> Dd {
        Dd(self.0.sqrt())
    }

    pub fn abs(self) -> Dd {
        if self.hi() < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn powi(self, n: u32) -> Dd {
        let mut base = self;
        let mut acc = Dd::from(1.0);
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }

    fn div_dd(a: TwoFloat, b: TwoFloat) -> TwoFloat {
        let q1 = a.hi() / b.hi();
        let r = a - b * q1;
        let q2 = r.hi() / b.hi();
        let r = r - b * q2;
        let q3 = r.hi() / b.hi();
        TwoFloat::new_add(q1, q2) + q3
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd(TwoFloat::from(x))
    }
}

impl fmt::Debug for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dd({:e} + {:e})", self.hi(), self.lo())
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd(-self.0)
    }
}

macro_rules! forward {
    ($tr:ident, $f:ident, $atr:ident, $af:ident) => {
        impl $tr<Dd> for Dd {
            type Output = Dd;
            fn $f(self, rhs: Dd) -> Dd {
                Dd(self.0.$f(rhs.0))
            }
        }
        impl $tr<f64> for Dd {
            type Output = Dd;
            fn $f(self, rhs: f64) -> Dd {
                Dd(self.0.$f(rhs))
            }
        }
        impl $tr<Dd> for f64 {
            type Output = Dd;
            fn $f(self, rhs: Dd) -> Dd {
                Dd(self.$f(rhs.0))
            }
        }
        impl $atr<Dd> for Dd {
            fn $af(&mut self, rhs: Dd) {
                *self = $tr::$f(*self, rhs);
            }
        }
        impl $atr<f64> for Dd {
            fn $af(&mut self, rhs: f64) {
                *self = $tr::$f(*self, rhs);
            }
        }
    };
}

forward!(Add, add, AddAssign, add_assign);
forward!(Sub, sub, SubAssign, sub_assign);
forward!(Mul, mul, MulAssign, mul_assign);

impl Div<Dd> for Dd {
    type Output = Dd;
    fn div(self, rhs: Dd) -> Dd {
        Dd(Dd::div_dd(self.0, rhs.0))
    }
}

impl Div<f64> for Dd {
    type Output = Dd;
    fn div(self, rhs: f64) -> Dd {
        Dd(self.0 / rhs)
    }
}

impl Div<Dd> for f64 {
    type Output = Dd;
    fn div(self, rhs: Dd) -> Dd {
        Dd(Dd::div_dd(TwoFloat::from(self), rhs.0))
    }
}

impl DivAssign<Dd> for Dd {
    fn div_assign(&mut self, rhs: Dd) {
        *self = *self / rhs;
    }
}

impl DivAssign<f64> for Dd {
    fn div_assign(&mut self, rhs: f64) {
        *self = *self / rhs;
    }
}
