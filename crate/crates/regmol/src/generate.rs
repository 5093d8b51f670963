//! Seeded random generation of molecules, for property suites and
//! benchmarks.
//!
//! Growth happens through operations that are closed over molecule-hood by
//! construction: pasting, atoms over round operands with matching
//! boundaries, and "bubbles" (gluing an identity-like cell over the closure
//! of a top cell, which lifts dimension by one while keeping both
//! boundaries).  All randomness flows from one ChaCha stream, so runs are
//! reproducible from a single seed.

use crate::error::Result;
use crate::fixtures;
use crate::molecule::{canonicalize, Molecule};
use crate::ogposet::{pushout_of_inclusions, Element, FacePair, Inclusion, OgPoset, Orientation};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

pub const SEED_ENV: &str = "MOLECULE_SEED";

pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Gen {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Seed from `MOLECULE_SEED`, defaulting to 7.
    pub fn from_env() -> Gen {
        let seed = std::env::var(SEED_ENV)
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(7);
        Gen::new(seed)
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Glues an identity-like cell over the closure of `x`, one dimension
    /// up; the result has both boundaries isomorphic to `base` when `x` is
    /// top-dimensional.
    pub fn bubble_at(base: &Molecule, x: Element) -> Result<Molecule> {
        let subset = base.subset(&[x])?;
        let (atom_view, atom_incl) = base.materialize(&subset)?;
        let (_, src_leg, _) = Molecule::atom_with_witnesses(&atom_view, &atom_view)?;
        let (raw, _, _) = pushout_of_inclusions(&atom_incl, &src_leg)?;
        let (canon, _, iterations) = canonicalize(&raw)?;
        Ok(Molecule::from_view(canon, iterations))
    }

    /// Bubble over a random top-dimensional cell.
    pub fn bubble(&mut self, base: &Molecule) -> Result<Molecule> {
        let n = base.dim().max(0) as usize;
        let index = self.rng.gen_range(0..base.poset().card(n));
        Gen::bubble_at(base, Element::new(n, index))
    }

    /// A random molecule grown from a pool by `depth` constructor steps.
    pub fn molecule(&mut self, depth: usize, max_size: usize) -> Molecule {
        let mut pool: Vec<Molecule> = vec![
            fixtures::arrow(),
            fixtures::binary(),
            fixtures::cobinary(),
        ];
        for _ in 0..depth {
            let pick = pool[self.rng.gen_range(0..pool.len())].clone();
            if pick.size() > max_size {
                continue;
            }
            let grown = match self.rng.gen_range(0..4u8) {
                0 => self.bubble(&pick),
                1 => {
                    // paste a bubble cap on a random boundary
                    let k = if pick.dim() <= 0 {
                        0
                    } else {
                        self.rng.gen_range(0..pick.dim()) as usize
                    };
                    self.grow_paste(&pick, k).map(|(m, _)| m)
                }
                2 => {
                    if pick.is_round() {
                        Molecule::atom(&pick, &pick)
                    } else {
                        self.bubble(&pick)
                    }
                }
                _ => {
                    // paste two pool entries when their boundaries agree
                    let other = pool[self.rng.gen_range(0..pool.len())].clone();
                    let k = pick.dim().min(other.dim()) - 1;
                    if k < 0 {
                        continue;
                    }
                    match pick.paste(&other, k as usize) {
                        Ok(m) => Ok(m),
                        Err(_) => continue,
                    }
                }
            };
            if let Ok(m) = grown {
                if m.size() <= max_size {
                    pool.push(m);
                }
            }
        }
        pool.pop().expect("pool never empty")
    }

    /// A random round molecule of the requested dimension.
    pub fn round(&mut self, dim: usize, fuel: usize) -> Result<Molecule> {
        if dim == 0 {
            return Ok(Molecule::point());
        }
        let lower = self.round(dim - 1, fuel / 2)?;
        let mut m = self.random_cell_over(&lower)?;
        // stack up to `fuel` more cells at codimension 1; each new cell's
        // input side must be the current output boundary
        for _ in 0..self.rng.gen_range(0..=fuel.min(3)) {
            let (top, _) = m.boundary_molecule(None, Orientation::Output)?;
            let variant = if top.dim() >= 1 && self.rng.gen_bool(0.5) {
                top.merger()?
            } else {
                top.clone()
            };
            let cell = Molecule::atom(&top, &variant)?;
            let next = m.paste(&cell, (m.dim() - 1) as usize)?;
            if next.is_round() {
                m = next;
            }
        }
        Ok(m)
    }

    /// A cell (atom) whose input boundary is `base`; the output side varies
    /// between `base` itself and its merger.
    fn random_cell_over(&mut self, base: &Molecule) -> Result<Molecule> {
        let variant = if base.dim() >= 1 && self.rng.gen_bool(0.5) {
            base.merger()?
        } else {
            base.clone()
        };
        if self.rng.gen_bool(0.5) {
            Molecule::atom(base, &variant)
        } else {
            Molecule::atom(&variant, base)
        }
    }

    /// Pastes a bubble cap onto the `k`-boundary, keeping the dimension and
    /// returning the inclusion of the original.
    fn grow_paste(&mut self, m: &Molecule, k: usize) -> Result<(Molecule, Inclusion)> {
        let output_side = self.rng.gen_bool(0.5);
        if output_side {
            let (b, _) = m.boundary_molecule(Some(k as isize), Orientation::Output)?;
            let cap = self.bubble(&b)?;
            let (grown, leg, _) = m.paste_with_witnesses(&cap, k)?;
            Ok((grown, leg))
        } else {
            let (b, _) = m.boundary_molecule(Some(k as isize), Orientation::Input)?;
            let cap = self.bubble(&b)?;
            let (grown, _, leg) = cap.paste_with_witnesses(m, k)?;
            Ok((grown, leg))
        }
    }

    /// Extends `v` by boundary pastings into a larger molecule of the same
    /// dimension, with the planted inclusion.
    pub fn extend(
        &mut self,
        v: &Molecule,
        steps: usize,
        max_size: usize,
    ) -> Result<(Molecule, Inclusion)> {
        let mut m = v.clone();
        let mut incl = Inclusion::identity(v.poset());
        for _ in 0..steps {
            if m.size() >= max_size || m.dim() < 1 {
                break;
            }
            let k = self.rng.gen_range(0..m.dim()) as usize;
            let (grown, leg) = self.grow_paste(&m, k)?;
            incl = incl.compose(&leg)?;
            m = grown;
        }
        Ok((m, incl))
    }

    /// Parties to the associativity law: `(U, V, W, k)` with `U #k V` and
    /// `V #k W` both defined.
    pub fn associative_triple(
        &mut self,
        depth: usize,
    ) -> Result<(Molecule, Molecule, Molecule, usize)> {
        let u = self.molecule(depth, 30);
        let k = if u.dim() <= 0 {
            return self.associative_triple(depth + 1);
        } else {
            self.rng.gen_range(0..u.dim()) as usize
        };
        let (ub, _) = u.boundary_molecule(Some(k as isize), Orientation::Output)?;
        let v = self.bubble(&ub)?;
        let (vb, _) = v.boundary_molecule(Some(k as isize), Orientation::Output)?;
        let w = self.bubble(&vb)?;
        Ok((u, v, w, k))
    }

    /// Parties to the interchange law: `(U, U', V, V', k, n)` with
    /// `(U #n U') #k (V #n V')` defined and `k < n`.
    pub fn interchange_quad(
        &mut self,
        depth: usize,
    ) -> Result<(Molecule, Molecule, Molecule, Molecule, usize, usize)> {
        let mut u = self.molecule(depth, 24);
        while u.dim() < 2 {
            u = Gen::bubble_at(
                &u,
                Element::new(u.dim().max(0) as usize, 0),
            )?;
        }
        let n = self.rng.gen_range(1..u.dim()) as usize;
        let k = self.rng.gen_range(0..n);
        let (unb, _) = u.boundary_molecule(Some(n as isize), Orientation::Output)?;
        let u2 = self.bubble(&unb)?;
        let x = u.paste(&u2, n)?;
        // V must reach dimension n + 1 over the shared k-boundary
        let (mut v, _) = x.boundary_molecule(Some(k as isize), Orientation::Output)?;
        while v.dim() <= n as isize {
            v = self.bubble(&v)?;
        }
        let (vnb, _) = v.boundary_molecule(Some(n as isize), Orientation::Output)?;
        let v2 = self.bubble(&vnb)?;
        Ok((u, u2, v, v2, k, n))
    }

    /// Shuffles every dimension's linear order, producing an equivalent
    /// (isomorphic) representation of the same poset.
    pub fn permute_representation(&mut self, poset: &OgPoset) -> OgPoset {
        let perms: Vec<Vec<usize>> = poset
            .face_data()
            .iter()
            .map(|g| {
                let mut p: Vec<usize> = (0..g.len()).collect();
                p.shuffle(&mut self.rng);
                p
            })
            .collect();
        // perms[d][old] = new index
        let mut face_data: Vec<Vec<FacePair>> = poset
            .face_data()
            .iter()
            .map(|g| vec![FacePair::default(); g.len()])
            .collect();
        for (d, grade) in poset.face_data().iter().enumerate() {
            for (old, pair) in grade.iter().enumerate() {
                let mut input: Vec<usize> =
                    pair.input.iter().map(|&f| perms[d - 1][f]).collect();
                let mut output: Vec<usize> =
                    pair.output.iter().map(|&f| perms[d - 1][f]).collect();
                input.sort_unstable();
                output.sort_unstable();
                face_data[d][perms[d][old]] = FacePair { input, output };
            }
        }
        OgPoset::from_face_data(face_data).expect("permutation preserves validity")
    }

    /// A random DAG over `0..n` with the given edge probability.
    pub fn random_dag(&mut self, n: usize, edge_p: f64) -> crate::flow::DiGraph<u32> {
        let mut order: Vec<u32> = (0..n as u32).collect();
        order.shuffle(&mut self.rng);
        let mut g = crate::flow::DiGraph::new((0..n as u32).collect());
        for i in 0..n {
            for j in (i + 1)..n {
                if self.rng.gen_bool(edge_p) {
                    g.add_edge_by_value(order[i], order[j]);
                }
            }
        }
        g
    }

    /// A dimension-3 instance for the fast-path equivalence: a round
    /// pattern with a planted inclusion into a larger molecule of the same
    /// dimension.
    pub fn dim3_instance(&mut self) -> Result<(Molecule, Inclusion)> {
        let v = self.round(3, 2)?;
        let steps = self.rng.gen_range(1..4);
        let (u, incl) = self.extend(&v, steps, 60)?;
        Ok((u, incl))
    }
}

/// A chain of `m` arrows pasted head to tail.
pub fn arrow_chain(m: usize) -> Molecule {
    let arrow = fixtures::arrow();
    let mut chain = arrow.clone();
    for _ in 1..m {
        chain = chain.paste(&arrow, 0).expect("endpoints always match");
    }
    chain
}

/// A stack of `m` 3-globes pasted at their 2-boundary.
pub fn globe3_chain(m: usize) -> Molecule {
    let globe = fixtures::globe(3);
    let mut chain = globe.clone();
    for _ in 1..m {
        chain = chain.paste(&globe, 2).expect("globe boundaries always match");
    }
    chain
}

/// Number of Hasse edges between dimensions 3 and 2.
pub fn e3_edges(poset: &Arc<OgPoset>) -> usize {
    poset
        .face_data()
        .get(3)
        .map_or(0, |g| g.iter().map(|p| p.len()).sum())
}
