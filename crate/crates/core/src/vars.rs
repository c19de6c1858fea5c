//! Interned variable identifiers with a fixed global ordering.
//!
//! The order of interning is the order used everywhere: by monomial
//! comparisons, by serialization and by chart constructions. The ambient
//! coordinates `Z0..Z9`, the cubic chart coordinates `X1..X4` and the
//! quintic chart coordinates `x0..x9` are pre-interned in that order so
//! that every run of the library agrees on it.

use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

struct Interner {
    names: Vec<&'static str>,
    index: HashMap<&'static str, u32>,
}

impl Interner {
    fn with_builtins() -> Self {
        let mut interner = Interner {
            names: Vec::new(),
            index: HashMap::new(),
        };
        for i in 0..10 {
            interner.intern_owned(format!("Z{i}"));
        }
        for i in 1..5 {
            interner.intern_owned(format!("X{i}"));
        }
        for i in 0..10 {
            interner.intern_owned(format!("x{i}"));
        }
        interner
    }

    fn intern_owned(&mut self, name: String) -> u32 {
        if let Some(&id) = self.index.get(name.as_str()) {
            return id;
        }
        let leaked: &'static str = Box::leak(name.into_boxed_str());
        let id = self.names.len() as u32;
        self.names.push(leaked);
        self.index.insert(leaked, id);
        id
    }
}

static INTERNER: Lazy<RwLock<Interner>> = Lazy::new(|| RwLock::new(Interner::with_builtins()));

/// An interned variable name. Copy-cheap; ordered by interning order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u32);

impl Var {
    /// Interns `name`, returning the existing identifier if already known.
    pub fn intern(name: &str) -> Var {
        if let Some(&id) = INTERNER.read().unwrap().index.get(name) {
            return Var(id);
        }
        Var(INTERNER.write().unwrap().intern_owned(name.to_owned()))
    }

    pub fn name(self) -> &'static str {
        INTERNER.read().unwrap().names[self.0 as usize]
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Homogeneous coordinate `Z<i>` on projective space.
pub fn z(i: usize) -> Var {
    debug_assert!(i < 10);
    Var::intern(&format!("Z{i}"))
}

/// Affine coordinate `X<i>` of the cubic chart (`X_i = Z_i / Z_m`).
pub fn chart_big_x(i: usize) -> Var {
    debug_assert!((1..=4).contains(&i));
    Var::intern(&format!("X{i}"))
}

/// Affine coordinate `x<i>` of the quintic chart (`x_i = Z_i / Z_8`).
pub fn chart_small_x(i: usize) -> Var {
    debug_assert!(i < 10);
    Var::intern(&format!("x{i}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_order_is_stable() {
        assert!(z(0) < z(9));
        assert!(z(9) < chart_big_x(1));
        assert!(chart_big_x(4) < chart_small_x(0));
        assert!(chart_small_x(1) < chart_small_x(3));
    }

    #[test]
    fn interning_is_idempotent() {
        let a = Var::intern("t0");
        let b = Var::intern("t0");
        assert_eq!(a, b);
        assert_eq!(a.name(), "t0");
        assert!(chart_small_x(9) < a);
    }
}
