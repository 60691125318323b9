use std::fmt;
use std::sync::Arc;

/// What a variable stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarRole {
    /// The Landau-Ginzburg coordinate `x`.
    FormalX,
    /// Flat coordinate `t_d`, `0 <= d <= r - 2`.
    Flat(u32),
    /// Versal coordinate `y_d`, `0 <= d <= r - 2`.
    Versal(u32),
    /// Formal twist variable `b_i`, `1 <= i <= l`.
    FormalB(u32),
}

impl VarRole {
    pub fn name(self) -> String {
        match self {
            VarRole::FormalX => "x".to_string(),
            VarRole::Flat(d) => format!("t{d}"),
            VarRole::Versal(d) => format!("y{d}"),
            VarRole::FormalB(i) => format!("b{i}"),
        }
    }

    pub fn latex(self) -> String {
        match self {
            VarRole::FormalX => "x".to_string(),
            VarRole::Flat(d) => format!("t_{{{d}}}"),
            VarRole::Versal(d) => format!("y_{{{d}}}"),
            VarRole::FormalB(i) => format!("b_{{{i}}}"),
        }
    }

    /// Deformation index of a `t` or `y` variable.
    pub fn deformation_index(self) -> Option<u32> {
        match self {
            VarRole::Flat(d) | VarRole::Versal(d) => Some(d),
            _ => None,
        }
    }
}

/// Ordered set of variables a [`crate::Poly`] is written over.
///
/// Registries are sized per computation. Polynomials over different
/// registries never combine implicitly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarRegistry {
    roles: Vec<VarRole>,
}

pub type Registry = Arc<VarRegistry>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("duplicate variable {0} in registry")]
pub struct DuplicateVariable(pub String);

impl VarRegistry {
    pub fn new(roles: Vec<VarRole>) -> Result<Registry, DuplicateVariable> {
        for (i, role) in roles.iter().enumerate() {
            if roles[..i].contains(role) {
                return Err(DuplicateVariable(role.name()));
            }
        }
        Ok(Arc::new(VarRegistry { roles }))
    }

    /// `x, t_0, ..., t_{r-2}`.
    pub fn flat(r: u32) -> Registry {
        Self::with_x(r, VarRole::Flat)
    }

    /// `x, y_0, ..., y_{r-2}`.
    pub fn versal(r: u32) -> Registry {
        Self::with_x(r, VarRole::Versal)
    }

    /// `b_1, ..., b_l`.
    pub fn formal_b(l: u32) -> Registry {
        Arc::new(VarRegistry {
            roles: (1..=l).map(VarRole::FormalB).collect(),
        })
    }

    fn with_x(r: u32, role: fn(u32) -> VarRole) -> Registry {
        assert!(r >= 2, "r must be at least 2");
        let roles = std::iter::once(VarRole::FormalX)
            .chain((0..r - 1).map(role))
            .collect();
        Arc::new(VarRegistry { roles })
    }

    pub fn len(&self) -> usize {
        self.roles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roles.is_empty()
    }

    pub fn roles(&self) -> &[VarRole] {
        &self.roles
    }

    pub fn role(&self, index: usize) -> VarRole {
        self.roles[index]
    }

    pub fn index_of(&self, role: VarRole) -> Option<usize> {
        self.roles.iter().position(|&r| r == role)
    }

    pub fn index_of_name(&self, name: &str) -> Option<usize> {
        self.roles.iter().position(|r| r.name() == name)
    }

    pub fn x_index(&self) -> Option<usize> {
        self.index_of(VarRole::FormalX)
    }

    /// Indices of every `t` or `y` variable, in registry order.
    pub fn deformation_indices(&self) -> Vec<usize> {
        self.roles
            .iter()
            .enumerate()
            .filter(|(_, r)| r.deformation_index().is_some())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn names(&self) -> Vec<String> {
        self.roles.iter().map(|r| r.name()).collect()
    }
}

impl fmt::Display for VarRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.names().join(", "))
    }
}
