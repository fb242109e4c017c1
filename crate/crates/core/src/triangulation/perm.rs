use serde::{Deserialize, Serialize};

/// A permutation of tetrahedron vertices `{0, 1, 2, 3}`; `self.0[v]` is the image of `v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Perm(pub [u8; 4]);

impl Perm {
    pub const IDENTITY: Perm = Perm([0, 1, 2, 3]);

    pub fn apply(&self, v: usize) -> usize {
        self.0[v] as usize
    }

    pub fn inverse(&self) -> Perm {
        let mut out = [0u8; 4];
        for (i, &x) in self.0.iter().enumerate() {
            out[x as usize] = i as u8;
        }
        Perm(out)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm([0, 1, 2, 3].map(|v| self.0[other.0[v] as usize]))
    }

    pub fn sign(&self) -> i8 {
        let mut s = 1;
        for i in 0..4 {
            for j in i + 1..4 {
                if self.0[i] > self.0[j] {
                    s = -s;
                }
            }
        }
        s
    }

    pub fn is_valid(&self) -> bool {
        let mut seen = [false; 4];
        self.0.iter().all(|&x| x < 4 && !std::mem::replace(&mut seen[x as usize], true))
    }

    /// Permutation sending `from[i]` to `to[i]` for the three listed vertices
    /// and the remaining vertex to the remaining vertex.
    pub fn from_face_map(from: [usize; 3], to: [usize; 3]) -> Perm {
        let mut p = [4u8; 4];
        for i in 0..3 {
            p[from[i]] = to[i] as u8;
        }
        let f_rest = (0..4).find(|v| !from.contains(v)).unwrap();
        let t_rest = (0..4).find(|v| !to.contains(v)).unwrap();
        p[f_rest] = t_rest as u8;
        Perm(p)
    }
}

/// The vertices of the face opposite `f`, increasing.
pub fn face_vertices(f: usize) -> [usize; 3] {
    let mut out = [0; 3];
    let mut k = 0;
    for v in 0..4 {
        if v != f {
            out[k] = v;
            k += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra() {
        let p = Perm([1, 2, 0, 3]);
        assert_eq!(p.compose(&p.inverse()), Perm::IDENTITY);
        assert_eq!(p.sign(), 1);
        assert_eq!(Perm([1, 0, 2, 3]).sign(), -1);
        assert_eq!(Perm::from_face_map([0, 1, 2], [1, 0, 3]), Perm([1, 0, 3, 2]));
        assert!(!Perm([0, 0, 1, 2]).is_valid());
    }
}
