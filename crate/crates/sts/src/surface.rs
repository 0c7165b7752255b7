//! Topology and geometry of a square-tiled surface.
//!
//! A pair `(sigma, tau)` of permutations of `{1..n}` glues `n` unit squares
//! into a closed translation surface: `sigma(i)` is the square to the right
//! of square `i`, `tau(i)` the square above it. The cycles of the commutator
//! `[sigma, tau]` are the vertices (a cycle of length `l` carries cone angle
//! `2*pi*l`), orbits of the pair are connected components, and the Euler
//! characteristic gives the genus `g = (n - V)/2 + 1` with `V` the vertex
//! count.

use serde_json::{json, Value};
use thiserror::Error;

use crate::partition::Partition;
use crate::perm::{orbits, Permutation, UnionFind};

#[derive(Debug, Error)]
pub enum SurfaceError {
    #[error("sigma and tau must have the same degree ({sigma} vs {tau})")]
    DegreeMismatch { sigma: u32, tau: u32 },
    #[error("a surface needs at least one square")]
    NoSquares,
}

pub struct SquareTiledSurface {
    sigma: Permutation,
    tau: Permutation,
}

/// Three-valued holonomy classification.
///
/// `Torus` is exact: the surface is a flat torus with marked points
/// (trivial holonomy everywhere) if and only if either the commutator has no
/// fixed points, or every commutator fixed point is fixed by both `sigma`
/// and `tau`. When that fails, `VisibilityCertified` reports that the number
/// of squares exceeds twice the commutator's fixed points — a sufficient
/// (not necessary) certificate that some cone point is geometrically
/// visible. Otherwise the criterion is inconclusive and the result is
/// `Undetermined`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Holonomy {
    Torus,
    VisibilityCertified,
    Undetermined,
}

impl Holonomy {
    pub fn letter(self) -> &'static str {
        match self {
            Holonomy::Torus => "H",
            Holonomy::VisibilityCertified => "V",
            Holonomy::Undetermined => "U",
        }
    }
}

/// A maximal horizontal cylinder: one or more rows of squares (bands) whose
/// dividing circles carry no cone point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cylinder {
    /// All squares in the cylinder, ascending.
    pub squares: Vec<u32>,
    /// Common length of the bands (the sigma-cycles) stacked in this
    /// cylinder.
    pub circumference: u32,
    /// Number of bands.
    pub height: u32,
    /// The bands themselves, each ascending, ordered by smallest square.
    pub bands: Vec<Vec<u32>>,
}

/// Stratum signature: cone-point orders (vertex angle `2*pi*(order+1)`),
/// weakly decreasing, plus the count of regular (marked) vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumSignature {
    pub orders: Vec<u32>,
    pub marked_points: u32,
}

impl StratumSignature {
    /// Dot rendering of the orders: "2.1.1", or "-" when there are no cone
    /// points.
    pub fn orders_string(&self) -> String {
        if self.orders.is_empty() {
            "-".to_string()
        } else {
            self.orders.iter().map(|o| o.to_string()).collect::<Vec<_>>().join(".")
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentReport {
    /// Squares in this connected component.
    pub n: u32,
    /// Vertices (commutator cycles) inside it.
    pub vertices: u32,
    pub genus: u32,
}

#[derive(Clone, Debug)]
pub struct SurfaceReport {
    pub n: u32,
    pub sigma: Permutation,
    pub tau: Permutation,
    pub commutator: Permutation,
    /// Cycle type of the commutator (cone angles in multiples of 2*pi).
    pub vertex_profile: Partition,
    pub vertex_count: u32,
    pub connected: bool,
    pub num_components: u32,
    /// For disconnected surfaces this is the aggregate
    /// `sum(genus_i) - (components - 1)`, which coincides with
    /// `(n - V)/2 + 1`.
    pub genus: u32,
    pub per_component: Vec<ComponentReport>,
    pub stratum: StratumSignature,
    pub cylinders: Vec<Cylinder>,
    pub holonomy: Holonomy,
}

impl SquareTiledSurface {
    pub fn new(sigma: Permutation, tau: Permutation) -> Result<Self, SurfaceError> {
        if sigma.degree() != tau.degree() {
            return Err(SurfaceError::DegreeMismatch {
                sigma: sigma.degree(),
                tau: tau.degree(),
            });
        }
        if sigma.degree() == 0 {
            return Err(SurfaceError::NoSquares);
        }
        Ok(SquareTiledSurface { sigma, tau })
    }

    pub fn n(&self) -> u32 {
        self.sigma.degree()
    }

    pub fn sigma(&self) -> &Permutation {
        &self.sigma
    }

    pub fn tau(&self) -> &Permutation {
        &self.tau
    }

    pub fn analyze(&self) -> SurfaceReport {
        let n = self.n();
        let commutator = self.sigma.commutator(&self.tau).expect("degrees match");
        let commutator_cycles = commutator.cycles();
        let vertex_profile = commutator.cycle_type();
        let vertex_count = vertex_profile.num_parts() as u32;

        let components = orbits(n, [&self.sigma, &self.tau]).expect("degrees match");
        let num_components = components.len() as u32;
        let connected = num_components == 1;

        // Each commutator cycle lies inside one component, so per-component
        // vertex counts follow from any member square.
        let mut component_of = vec![0u32; n as usize];
        for (ci, comp) in components.iter().enumerate() {
            for &sq in comp {
                component_of[(sq - 1) as usize] = ci as u32;
            }
        }
        let mut vertices_in = vec![0u32; components.len()];
        for cycle in &commutator_cycles.cycles {
            vertices_in[component_of[(cycle[0] - 1) as usize] as usize] += 1;
        }
        let per_component: Vec<ComponentReport> = components
            .iter()
            .zip(&vertices_in)
            .map(|(comp, &v)| {
                let size = comp.len() as u32;
                ComponentReport { n: size, vertices: v, genus: (size - v) / 2 + 1 }
            })
            .collect();
        let genus = (n - vertex_count) / 2 + 1;

        let orders: Vec<u32> = commutator_cycles
            .cycles
            .iter()
            .filter(|c| c.len() >= 2)
            .map(|c| c.len() as u32 - 1)
            .collect();
        let marked_points = commutator.fixed_points().len() as u32;
        let stratum = StratumSignature { orders, marked_points };

        let cylinders = self.horizontal_cylinders_with(&commutator);
        let holonomy = self.classify_holonomy_with(&commutator);

        SurfaceReport {
            n,
            sigma: self.sigma.clone(),
            tau: self.tau.clone(),
            commutator,
            vertex_profile,
            vertex_count,
            connected,
            num_components,
            genus,
            per_component,
            stratum,
            cylinders,
            holonomy,
        }
    }

    /// Maximal horizontal cylinders.
    ///
    /// Each sigma-cycle is a band (one row of squares wrapping around). The
    /// circle separating band `A` from the squares above carries no cone
    /// point exactly when `tau(i)` is a commutator fixed point for every
    /// `i` in `A`; merging across all such cone-free circles yields the
    /// maximal cylinders. When a circle is cone-free the row above is
    /// automatically a single band of the same length.
    pub fn horizontal_cylinders(&self) -> Vec<Cylinder> {
        let commutator = self.sigma.commutator(&self.tau).expect("degrees match");
        self.horizontal_cylinders_with(&commutator)
    }

    fn horizontal_cylinders_with(&self, commutator: &Permutation) -> Vec<Cylinder> {
        let n = self.n();
        let bands: Vec<Vec<u32>> = {
            let mut cycles = self.sigma.cycles().cycles;
            for c in cycles.iter_mut() {
                c.sort_unstable();
            }
            cycles.sort_by_key(|c| c[0]);
            cycles
        };
        let mut band_of = vec![0usize; n as usize];
        for (bi, band) in bands.iter().enumerate() {
            for &sq in band {
                band_of[(sq - 1) as usize] = bi;
            }
        }

        let mut uf = UnionFind::new(bands.len());
        for (bi, band) in bands.iter().enumerate() {
            let cone_free = band
                .iter()
                .all(|&i| { let up = self.tau.apply(i); commutator.apply(up) == up });
            if cone_free {
                let up_band = band_of[(self.tau.apply(band[0]) - 1) as usize];
                uf.union(bi, up_band);
            }
        }

        let mut grouped: Vec<Vec<usize>> = vec![Vec::new(); bands.len()];
        for bi in 0..bands.len() {
            grouped[uf.find(bi)].push(bi);
        }
        let mut cylinders: Vec<Cylinder> = grouped
            .into_iter()
            .filter(|g| !g.is_empty())
            .map(|group| {
                let member_bands: Vec<Vec<u32>> =
                    group.iter().map(|&bi| bands[bi].clone()).collect();
                let circumference = member_bands[0].len() as u32;
                debug_assert!(member_bands.iter().all(|b| b.len() as u32 == circumference));
                let mut squares: Vec<u32> =
                    member_bands.iter().flatten().copied().collect();
                squares.sort_unstable();
                Cylinder {
                    squares,
                    circumference,
                    height: member_bands.len() as u32,
                    bands: member_bands,
                }
            })
            .collect();
        cylinders.sort_by_key(|c| c.squares[0]);
        cylinders
    }

    /// Three-valued holonomy test; see [`Holonomy`].
    pub fn classify_holonomy(&self) -> Holonomy {
        let commutator = self.sigma.commutator(&self.tau).expect("degrees match");
        self.classify_holonomy_with(&commutator)
    }

    fn classify_holonomy_with(&self, commutator: &Permutation) -> Holonomy {
        let fixed = commutator.fixed_points();
        if fixed.is_empty() {
            return Holonomy::Torus;
        }
        let both_fixed = fixed
            .iter()
            .all(|&x| self.sigma.apply(x) == x && self.tau.apply(x) == x);
        if both_fixed {
            return Holonomy::Torus;
        }
        if self.n() as usize > 2 * fixed.len() {
            Holonomy::VisibilityCertified
        } else {
            Holonomy::Undetermined
        }
    }
}

impl SurfaceReport {
    /// JSON rendering with a stable schema. Permutations appear in cycle
    /// notation, partitions and stratum orders in dot notation, holonomy as
    /// "H" / "V" / "U".
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "sigma": self.sigma.to_string(),
            "tau": self.tau.to_string(),
            "commutator": self.commutator.to_string(),
            "vertex_profile": self.vertex_profile.to_string(),
            "vertex_count": self.vertex_count,
            "connected": self.connected,
            "num_components": self.num_components,
            "genus": self.genus,
            "per_component": self.per_component.iter().map(|c| json!({
                "n": c.n,
                "vertices": c.vertices,
                "genus": c.genus,
            })).collect::<Vec<_>>(),
            "stratum": self.stratum.orders_string(),
            "marked_points": self.stratum.marked_points,
            "cylinders": self.cylinders.iter().map(|c| json!({
                "squares": c.squares,
                "circumference": c.circumference,
                "height": c.height,
            })).collect::<Vec<_>>(),
            "holonomy": self.holonomy.letter(),
        })
    }
}
