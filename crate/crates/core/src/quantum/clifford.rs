//! Single-qubit Paulis and the 24-element single-qubit Clifford group
//! (modulo global phase), stored as the images of `X` and `Z`.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    /// `self * other = i^k * result`.
    pub fn product(self, other: Pauli) -> (u8, Pauli) {
        use Pauli::*;
        match (self, other) {
            (I, p) | (p, I) => (0, p),
            (a, b) if a == b => (0, I),
            (X, Y) => (1, Z),
            (Y, Z) => (1, X),
            (Z, X) => (1, Y),
            (Y, X) => (3, Z),
            (Z, Y) => (3, X),
            (X, Z) => (3, Y),
            _ => unreachable!(),
        }
    }

    pub fn commutes(self, other: Pauli) -> bool {
        self == Pauli::I || other == Pauli::I || self == other
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        };
        write!(f, "{c}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignedPauli {
    pub neg: bool,
    pub pauli: Pauli,
}

impl SignedPauli {
    pub const fn plus(pauli: Pauli) -> Self {
        Self { neg: false, pauli }
    }

    pub const fn minus(pauli: Pauli) -> Self {
        Self { neg: true, pauli }
    }

    pub fn sign(self) -> i8 {
        if self.neg {
            -1
        } else {
            1
        }
    }
}

impl fmt::Display for SignedPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", if self.neg { '-' } else { '+' }, self.pauli)
    }
}

/// A single-qubit Clifford `U`, identified by `U X U†` and `U Z U†`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Clifford {
    x: SignedPauli,
    z: SignedPauli,
}

impl Clifford {
    pub const IDENTITY: Clifford = Clifford { x: SignedPauli::plus(Pauli::X), z: SignedPauli::plus(Pauli::Z) };
    /// `diag(1, i)`.
    pub const S: Clifford = Clifford { x: SignedPauli::plus(Pauli::Y), z: SignedPauli::plus(Pauli::Z) };
    pub const S_DAG: Clifford = Clifford { x: SignedPauli::minus(Pauli::Y), z: SignedPauli::plus(Pauli::Z) };
    pub const H: Clifford = Clifford { x: SignedPauli::plus(Pauli::Z), z: SignedPauli::plus(Pauli::X) };
    pub const X: Clifford = Clifford { x: SignedPauli::plus(Pauli::X), z: SignedPauli::minus(Pauli::Z) };
    pub const Y: Clifford = Clifford { x: SignedPauli::minus(Pauli::X), z: SignedPauli::minus(Pauli::Z) };
    pub const Z: Clifford = Clifford { x: SignedPauli::minus(Pauli::X), z: SignedPauli::plus(Pauli::Z) };

    /// `None` unless the images are non-identity and anticommute.
    pub fn from_images(x: SignedPauli, z: SignedPauli) -> Option<Self> {
        (x.pauli != Pauli::I && z.pauli != Pauli::I && !x.pauli.commutes(z.pauli)).then_some(Self { x, z })
    }

    pub fn x_image(self) -> SignedPauli {
        self.x
    }

    pub fn z_image(self) -> SignedPauli {
        self.z
    }

    /// All 24 elements in a fixed order, identity first.
    pub fn all() -> &'static [Clifford; 24] {
        static ALL: OnceLock<[Clifford; 24]> = OnceLock::new();
        ALL.get_or_init(|| {
            let mut out = [Clifford::IDENTITY; 24];
            let mut i = 0;
            for px in [Pauli::X, Pauli::Y, Pauli::Z] {
                for pz in [Pauli::Z, Pauli::X, Pauli::Y] {
                    for (nx, nz) in [(false, false), (false, true), (true, false), (true, true)] {
                        if let Some(c) = Clifford::from_images(SignedPauli { neg: nx, pauli: px }, SignedPauli { neg: nz, pauli: pz }) {
                            out[i] = c;
                            i += 1;
                        }
                    }
                }
            }
            debug_assert_eq!(i, 24);
            out
        })
    }

    /// Position in [`Clifford::all`].
    pub fn index(self) -> usize {
        Self::all().iter().position(|&c| c == self).expect("valid Clifford")
    }

    /// `U P U†`.
    pub fn conjugate(self, p: SignedPauli) -> SignedPauli {
        let image = match p.pauli {
            Pauli::I => SignedPauli::plus(Pauli::I),
            Pauli::X => self.x,
            Pauli::Z => self.z,
            Pauli::Y => {
                // Y = i X Z
                let (k, pauli) = self.x.pauli.product(self.z.pauli);
                let phase = (1 + k + 2 * (self.x.neg as u8 + self.z.neg as u8)) % 4;
                debug_assert!(phase.is_multiple_of(2));
                SignedPauli { neg: phase == 2, pauli }
            }
        };
        SignedPauli { neg: image.neg ^ p.neg, pauli: image.pauli }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(self, other: Clifford) -> Clifford {
        Clifford { x: self.conjugate(other.x), z: self.conjugate(other.z) }
    }

    pub fn inverse(self) -> Clifford {
        *Self::all()
            .iter()
            .find(|&&c| self.compose(c) == Self::IDENTITY)
            .expect("group element has an inverse")
    }

    pub fn is_identity(self) -> bool {
        self == Self::IDENTITY
    }
}

impl fmt::Display for Clifford {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X{}Z{}", self.x, self.z)
    }
}

impl From<Clifford> for String {
    fn from(c: Clifford) -> String {
        c.to_string()
    }
}

impl TryFrom<String> for Clifford {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        let b = s.as_bytes();
        let signed = |sign: u8, p: u8| -> Option<SignedPauli> {
            let pauli = match p {
                b'X' => Pauli::X,
                b'Y' => Pauli::Y,
                b'Z' => Pauli::Z,
                _ => return None,
            };
            match sign {
                b'+' => Some(SignedPauli::plus(pauli)),
                b'-' => Some(SignedPauli::minus(pauli)),
                _ => None,
            }
        };
        if b.len() != 6 || b[0] != b'X' || b[3] != b'Z' {
            return Err(format!("bad Clifford label {s:?}"));
        }
        signed(b[1], b[2])
            .zip(signed(b[4], b[5]))
            .and_then(|(x, z)| Clifford::from_images(x, z))
            .ok_or_else(|| format!("bad Clifford label {s:?}"))
    }
}
