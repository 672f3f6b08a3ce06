//! Conflict graph of a straight-road corridor.
//!
//! Two vehicles conflict when their longitudinal distance is at most the
//! interference reach `R·I` (lateral lane offsets ignored). Because the
//! relation depends on position only, the neighbours of a vehicle form a
//! contiguous run in position order, so the graph is stored as one
//! `[lo, hi]` rank interval per vehicle rather than as adjacency lists.
//! The same holds for two-hop neighbourhoods: `[lo(lo(r)), hi(hi(r))]`.

use super::road::Vehicle;
use crate::model::RadioConfig;

#[derive(Debug, Clone)]
pub struct ConflictGraph {
    reach_m: f64,
    /// Vehicle index for each rank (position order, then lane, then index).
    order: Vec<usize>,
    /// Rank of each vehicle index.
    rank: Vec<usize>,
    positions: Vec<f64>,
    lo: Vec<usize>,
    hi: Vec<usize>,
}

fn tolerance(reach_m: f64) -> f64 {
    1e-9 * reach_m.max(1.0)
}

pub fn build_conflict_graph(vehicles: &[Vehicle], radio: &RadioConfig) -> ConflictGraph {
    let reach_m = radio.interference_range_m();
    let mut order: Vec<usize> = (0..vehicles.len()).collect();
    order.sort_by(|&a, &b| {
        let (va, vb) = (&vehicles[a], &vehicles[b]);
        va.position_m
            .total_cmp(&vb.position_m)
            .then(va.lane.cmp(&vb.lane))
            .then(a.cmp(&b))
    });
    let mut rank = vec![0; vehicles.len()];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r;
    }
    let positions: Vec<f64> = order.iter().map(|&i| vehicles[i].position_m).collect();
    let limit = reach_m + tolerance(reach_m);

    let n = positions.len();
    let mut lo = vec![0; n];
    let mut hi = vec![0; n];
    let (mut left, mut right) = (0, 0);
    for r in 0..n {
        while positions[r] - positions[left] > limit {
            left += 1;
        }
        right = right.max(r);
        while right + 1 < n && positions[right + 1] - positions[r] <= limit {
            right += 1;
        }
        lo[r] = left;
        hi[r] = right;
    }

    ConflictGraph {
        reach_m,
        order,
        rank,
        positions,
        lo,
        hi,
    }
}

impl ConflictGraph {
    pub fn node_count(&self) -> usize {
        self.order.len()
    }

    pub fn reach_m(&self) -> f64 {
        self.reach_m
    }

    pub fn degree(&self, vehicle: usize) -> usize {
        let r = self.rank[vehicle];
        self.hi[r] - self.lo[r]
    }

    pub fn max_degree(&self) -> usize {
        (0..self.node_count()).map(|r| self.hi[r] - self.lo[r]).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        (0..self.node_count()).map(|r| self.hi[r] - self.lo[r]).sum::<usize>() / 2
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        if a == b {
            return false;
        }
        let (ra, rb) = (self.rank[a], self.rank[b]);
        (self.lo[ra]..=self.hi[ra]).contains(&rb)
    }

    /// Conflicting vehicles (by index), excluding `vehicle` itself.
    pub fn neighbors(&self, vehicle: usize) -> impl Iterator<Item = usize> + '_ {
        let r = self.rank[vehicle];
        (self.lo[r]..=self.hi[r])
            .filter(move |&s| s != r)
            .map(move |s| self.order[s])
    }

    /// Vehicles sharing a neighbour with `vehicle` or adjacent to it.
    pub fn two_hop_neighbors(&self, vehicle: usize) -> impl Iterator<Item = usize> + '_ {
        let r = self.rank[vehicle];
        (self.two_hop_lo(r)..=self.two_hop_hi(r))
            .filter(move |&s| s != r)
            .map(move |s| self.order[s])
    }

    /// Vehicle closest to `position_m`.
    pub fn nearest(&self, position_m: f64) -> Option<usize> {
        let r = self.positions.partition_point(|&p| p < position_m);
        let candidates = [r.checked_sub(1), (r < self.node_count()).then_some(r)];
        candidates
            .into_iter()
            .flatten()
            .min_by(|&a, &b| {
                (self.positions[a] - position_m)
                    .abs()
                    .total_cmp(&(self.positions[b] - position_m).abs())
            })
            .map(|r| self.order[r])
    }

    pub(crate) fn order(&self) -> &[usize] {
        &self.order
    }

    pub(crate) fn lo(&self, r: usize) -> usize {
        self.lo[r]
    }

    pub(crate) fn hi(&self, r: usize) -> usize {
        self.hi[r]
    }

    pub(crate) fn two_hop_lo(&self, r: usize) -> usize {
        self.lo[self.lo[r]]
    }

    pub(crate) fn two_hop_hi(&self, r: usize) -> usize {
        self.hi[self.hi[r]]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::RoadScenario;
    use crate::sim::build_road;

    fn graph(lanes: u32, gap: f64, len: f64) -> ConflictGraph {
        let v = build_road(&RoadScenario::new(lanes, gap, len)).unwrap();
        build_conflict_graph(&v, &RadioConfig::default())
    }

    #[test]
    fn mid_road_degrees() {
        let g = graph(2, 300.0, 6000.0);
        assert_eq!(g.degree(g.nearest(3000.0).unwrap()), 9);
        let g = graph(2, 6.0, 3000.0);
        assert_eq!(g.degree(g.nearest(1500.0).unwrap()), 401);
    }

    #[test]
    fn single_vehicle_has_no_edges() {
        let v = vec![Vehicle { id: 0, lane: 0, position_m: 10.0 }];
        let g = build_conflict_graph(&v, &RadioConfig::default());
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.neighbors(0).count(), 0);
    }

    #[test]
    fn edges_match_pairwise_distance() {
        let vehicles = vec![
            Vehicle { id: 0, lane: 1, position_m: 900.0 },
            Vehicle { id: 1, lane: 0, position_m: 0.0 },
            Vehicle { id: 2, lane: 0, position_m: 600.0 },
            Vehicle { id: 3, lane: 2, position_m: 1300.0 },
            Vehicle { id: 4, lane: 0, position_m: 601.0 },
        ];
        let g = build_conflict_graph(&vehicles, &RadioConfig::default());
        for a in 0..vehicles.len() {
            for b in 0..vehicles.len() {
                let want = a != b && (vehicles[a].position_m - vehicles[b].position_m).abs() <= 600.0;
                assert_eq!(g.has_edge(a, b), want, "{a}-{b}");
            }
            let mut n: Vec<usize> = g.neighbors(a).collect();
            n.sort_unstable();
            let mut want: Vec<usize> = (0..vehicles.len()).filter(|&b| g.has_edge(a, b)).collect();
            want.sort_unstable();
            assert_eq!(n, want);
        }
        // 1 (0 m) reaches 3 (1300 m) only through 2 or 4.
        assert!(!g.has_edge(1, 3));
        assert!(!g.two_hop_neighbors(1).any(|x| x == 3));
        assert!(g.two_hop_neighbors(1).any(|x| x == 0));
    }
}
