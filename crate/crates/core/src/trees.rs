//! Decorated bipartite trees with labelled □- and ○-vertices.
//!
//! A tree is stored as the canonical sorted set of its black-vertex "double
//! sets" (I, J): the boxes and circles each black vertex joins. Boxes have
//! valence one, blacks valence at least two, and edges only connect black
//! with white vertices. Two independent generators are provided: direct
//! enumeration, and the recursive box/circle growth constructions.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Errors from tree enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeError {
    /// No tree satisfies the constraints for the requested shape.
    EmptyFamily,
}

impl fmt::Display for TreeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeError::EmptyFamily => f.write_str("no trees with this shape"),
        }
    }
}

/// A black vertex: the labels of the boxes (I) and circles (J) it joins.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct DoubleSet {
    pub boxes: Vec<usize>,
    pub circles: Vec<usize>,
}

impl DoubleSet {
    pub fn new(mut boxes: Vec<usize>, mut circles: Vec<usize>) -> Self {
        boxes.sort_unstable();
        circles.sort_unstable();
        DoubleSet { boxes, circles }
    }

    pub fn valence(&self) -> usize {
        self.boxes.len() + self.circles.len()
    }
}

impl fmt::Display for DoubleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("({")?;
        for (i, b) in self.boxes.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", b)?;
        }
        f.write_str("},{")?;
        for (i, c) in self.circles.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", c)?;
        }
        f.write_str("})")
    }
}

/// A decorated tree in canonical form: the sorted list of its double sets.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Tree {
    pub n: usize,
    pub m: usize,
    pub blacks: Vec<DoubleSet>,
}

impl Tree {
    pub fn new(n: usize, m: usize, mut blacks: Vec<DoubleSet>) -> Self {
        blacks.sort();
        Tree { n, m, blacks }
    }

    /// Valence of the j-th ○-vertex (1-based): the number of blacks joining it.
    pub fn circle_valence(&self, j: usize) -> usize {
        self.blacks
            .iter()
            .filter(|d| d.circles.binary_search(&j).is_ok())
            .count()
    }

    /// All circle valences r_1..r_m.
    pub fn circle_valences(&self) -> Vec<usize> {
        (1..=self.m).map(|j| self.circle_valence(j)).collect()
    }

    /// Order of the automorphism group fixing the labelled white vertices
    /// (black vertices may permute). Brute force over black permutations.
    pub fn aut(&self) -> u64 {
        let k = self.blacks.len();
        if k <= 1 {
            return 1;
        }
        let mut count = 0u64;
        let mut idx: Vec<usize> = (0..k).collect();
        // Heap's algorithm
        fn heap(
            arr: &mut Vec<usize>,
            size: usize,
            blacks: &[DoubleSet],
            count: &mut u64,
        ) {
            if size == 1 {
                if arr
                    .iter()
                    .enumerate()
                    .all(|(i, &p)| blacks[i] == blacks[p])
                {
                    *count += 1;
                }
                return;
            }
            for i in 0..size {
                heap(arr, size - 1, blacks, count);
                if size % 2 == 0 {
                    arr.swap(i, size - 1);
                } else {
                    arr.swap(0, size - 1);
                }
            }
        }
        heap(&mut idx, k, &self.blacks, &mut count);
        count
    }

    /// Structural validity: disjoint box cover, nonempty circle sets when
    /// m ≥ 1, valences ≥ 2, tree edge count, connectivity.
    pub fn is_valid(&self) -> bool {
        let mut seen_boxes = vec![false; self.n + 1];
        let mut edges = 0usize;
        for d in &self.blacks {
            if d.valence() < 2 {
                return false;
            }
            if self.m >= 1 && d.circles.is_empty() {
                return false;
            }
            for &b in &d.boxes {
                if b == 0 || b > self.n || seen_boxes[b] {
                    return false;
                }
                seen_boxes[b] = true;
            }
            for &c in &d.circles {
                if c == 0 || c > self.m {
                    return false;
                }
            }
            edges += d.valence();
        }
        if seen_boxes[1..].iter().any(|&s| !s) {
            return false;
        }
        // pairwise distinct double sets (canonical sort makes this adjacent)
        for w in self.blacks.windows(2) {
            if w[0] == w[1] {
                return false;
            }
        }
        if edges + 1 != self.n + self.m + self.blacks.len() {
            return false;
        }
        self.connected()
    }

    /// Connectivity of the black–circle incidence graph (boxes are leaves).
    fn connected(&self) -> bool {
        let k = self.blacks.len();
        if k == 0 {
            // only the bare single-circle tree has no blacks
            return self.n == 0 && self.m <= 1;
        }
        // nodes: 0..m circles (1-based shifted), m..m+k blacks
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); self.m + k];
        for (bi, d) in self.blacks.iter().enumerate() {
            for &c in &d.circles {
                adj[c - 1].push(self.m + bi);
                adj[self.m + bi].push(c - 1);
            }
        }
        let mut seen = vec![false; self.m + k];
        let mut stack = vec![self.m]; // first black
        seen[self.m] = true;
        let mut visited = 0;
        while let Some(u) = stack.pop() {
            visited += 1;
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        visited == self.m + k
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, d) in self.blacks.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", d)?;
        }
        f.write_str("}")
    }
}

/// Direct enumeration of all decorated trees with `n` boxes and `m` circles.
pub fn enumerate_trees(n: usize, m: usize) -> Result<BTreeSet<Tree>, TreeError> {
    if n + m == 0 || (m == 0 && n < 2) {
        return Err(TreeError::EmptyFamily);
    }
    let mut out = BTreeSet::new();
    if m == 0 {
        out.insert(Tree::new(
            n,
            0,
            vec![DoubleSet::new((1..=n).collect(), Vec::new())],
        ));
        return Ok(out);
    }
    if n == 0 && m == 1 {
        out.insert(Tree::new(0, 1, Vec::new()));
        return Ok(out);
    }
    // universe of admissible double sets as (box-mask, circle-mask)
    let mut universe: Vec<(u64, u64)> = Vec::new();
    for bm in 0..(1u64 << n) {
        for cm in 1..(1u64 << m) {
            if (bm.count_ones() + cm.count_ones()) >= 2 {
                universe.push((bm, cm));
            }
        }
    }
    let budget = n + m - 1; // Σ (valence − 1) over blacks
    let mut chosen: Vec<usize> = Vec::new();
    search(
        &universe,
        0,
        0u64,
        0usize,
        n,
        m,
        budget,
        &mut chosen,
        &mut out,
    );
    if out.is_empty() {
        return Err(TreeError::EmptyFamily);
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn search(
    universe: &[(u64, u64)],
    start: usize,
    used_boxes: u64,
    weight: usize,
    n: usize,
    m: usize,
    budget: usize,
    chosen: &mut Vec<usize>,
    out: &mut BTreeSet<Tree>,
) {
    let full = if n == 0 { 0 } else { (1u64 << n) - 1 };
    if weight == budget {
        if used_boxes == full {
            let tree = materialize(universe, chosen, n, m);
            if tree.is_valid() {
                out.insert(tree);
            }
        }
        return;
    }
    let remaining_boxes = (full & !used_boxes).count_ones() as usize;
    if weight + remaining_boxes > budget {
        return;
    }
    for idx in start..universe.len() {
        let (bm, cm) = universe[idx];
        if bm & used_boxes != 0 {
            continue;
        }
        let w = (bm.count_ones() + cm.count_ones()) as usize - 1;
        if weight + w > budget {
            continue;
        }
        chosen.push(idx);
        search(
            universe,
            idx + 1,
            used_boxes | bm,
            weight + w,
            n,
            m,
            budget,
            chosen,
            out,
        );
        chosen.pop();
    }
}

fn materialize(universe: &[(u64, u64)], chosen: &[usize], n: usize, m: usize) -> Tree {
    let blacks = chosen
        .iter()
        .map(|&i| {
            let (bm, cm) = universe[i];
            DoubleSet::new(
                (1..=n).filter(|&b| bm >> (b - 1) & 1 == 1).collect(),
                (1..=m).filter(|&c| cm >> (c - 1) & 1 == 1).collect(),
            )
        })
        .collect();
    Tree::new(n, m, blacks)
}

/// All set partitions of `{0, .., k-1}`, each as sorted blocks ordered by
/// their minima. `k = 0` gives the single empty partition.
pub fn set_partitions(k: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    fn rec(next: usize, k: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if next == k {
            out.push(blocks.clone());
            return;
        }
        for i in 0..blocks.len() {
            blocks[i].push(next);
            rec(next + 1, k, blocks, out);
            blocks[i].pop();
        }
        blocks.push(vec![next]);
        rec(next + 1, k, blocks, out);
        blocks.pop();
    }
    rec(0, k, &mut blocks, &mut out);
    out
}

/// Bell number via the independent partition enumerator.
pub fn bell(k: usize) -> usize {
    set_partitions(k).len()
}

/// Box growth: builds the complete family with one more box from the
/// complete family `trees` of shape `(n, m)`. Each tree is produced once.
pub fn grow_box(trees: &BTreeSet<Tree>, n: usize, m: usize) -> BTreeSet<Tree> {
    let mut out = BTreeSet::new();
    let newbox = n + 1;
    for t in trees {
        // attach via a fresh valence-two black to a circle
        for j in 1..=m {
            let mut blacks = t.blacks.clone();
            blacks.push(DoubleSet::new(vec![newbox], vec![j]));
            out.insert(Tree::new(newbox, m, blacks));
        }
        // or adjoin the box to an existing black
        for (bi, d) in t.blacks.iter().enumerate() {
            let mut blacks = t.blacks.clone();
            let mut boxes = d.boxes.clone();
            boxes.push(newbox);
            blacks[bi] = DoubleSet::new(boxes, d.circles.clone());
            out.insert(Tree::new(newbox, m, blacks));
        }
    }
    out
}

/// Circle growth: builds the complete family with one more circle. A fresh
/// valence-two black attaches the new circle to an existing circle, or an
/// existing black of valence k is re-split according to the partition
/// structure of the k-slot single-circle family.
pub fn grow_circle(trees: &BTreeSet<Tree>, n: usize, m: usize) -> BTreeSet<Tree> {
    let mut out = BTreeSet::new();
    let newc = m + 1;
    for t in trees {
        for j in 1..=m {
            let mut blacks = t.blacks.clone();
            blacks.push(DoubleSet::new(Vec::new(), vec![j, newc]));
            out.insert(Tree::new(n, newc, blacks));
        }
        for (bi, d) in t.blacks.iter().enumerate() {
            // slots: the white neighbours of this black, boxes then circles
            let v = d.valence();
            for parts in set_partitions(v) {
                let mut blacks: Vec<DoubleSet> = t
                    .blacks
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != bi)
                    .map(|(_, x)| x.clone())
                    .collect();
                for part in &parts {
                    let mut boxes = Vec::new();
                    let mut circles = vec![newc];
                    for &slot in part {
                        if slot < d.boxes.len() {
                            boxes.push(d.boxes[slot]);
                        } else {
                            circles.push(d.circles[slot - d.boxes.len()]);
                        }
                    }
                    blacks.push(DoubleSet::new(boxes, circles));
                }
                out.insert(Tree::new(n, newc, blacks));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat_int, Rat};
    use num_traits::Zero;

    #[test]
    fn known_counts() {
        assert_eq!(enumerate_trees(2, 1).unwrap().len(), 2);
        assert_eq!(enumerate_trees(1, 2).unwrap().len(), 3);
        assert_eq!(enumerate_trees(3, 1).unwrap().len(), 5);
        assert_eq!(enumerate_trees(0, 3).unwrap().len(), 4);
        assert_eq!(enumerate_trees(0, 4).unwrap().len(), 29);
        for n in 2..=5 {
            assert_eq!(enumerate_trees(n, 0).unwrap().len(), 1);
        }
        assert_eq!(enumerate_trees(0, 1).unwrap().len(), 1);
        assert!(enumerate_trees(1, 0).is_err());
        assert!(enumerate_trees(0, 0).is_err());
    }

    #[test]
    fn paper_figure_families() {
        // G_{2,1}: ({1,2},{1}) and {({1},{1}),({2},{1})}
        let g21 = enumerate_trees(2, 1).unwrap();
        let t1 = Tree::new(2, 1, vec![DoubleSet::new(vec![1, 2], vec![1])]);
        let t2 = Tree::new(
            2,
            1,
            vec![
                DoubleSet::new(vec![1], vec![1]),
                DoubleSet::new(vec![2], vec![1]),
            ],
        );
        assert!(g21.contains(&t1) && g21.contains(&t2));
        // G_{1,2}: ({1},{1,2}); {({1},{1}),(∅,{1,2})}; {(∅,{1,2}),({1},{2})}
        let g12 = enumerate_trees(1, 2).unwrap();
        assert!(g12.contains(&Tree::new(1, 2, vec![DoubleSet::new(vec![1], vec![1, 2])])));
        assert!(g12.contains(&Tree::new(
            1,
            2,
            vec![
                DoubleSet::new(vec![1], vec![1]),
                DoubleSet::new(vec![], vec![1, 2])
            ]
        )));
        assert!(g12.contains(&Tree::new(
            1,
            2,
            vec![
                DoubleSet::new(vec![], vec![1, 2]),
                DoubleSet::new(vec![1], vec![2])
            ]
        )));
    }

    #[test]
    fn all_enumerated_trees_are_valid() {
        for n in 0..=4 {
            for m in 0..=4 {
                if n + m == 0 || n + m > 6 || (m == 0 && n < 2) {
                    continue;
                }
                for t in enumerate_trees(n, m).unwrap() {
                    assert!(t.is_valid(), "invalid tree {} in G({},{})", t, n, m);
                }
            }
        }
    }

    #[test]
    fn single_circle_family_matches_bell() {
        let bells = [1usize, 1, 2, 5, 15, 52, 203];
        for n in 1..=6 {
            assert_eq!(enumerate_trees(n, 1).unwrap().len(), bells[n], "n = {}", n);
            assert_eq!(bell(n), bells[n]);
        }
    }

    #[test]
    fn growth_agrees_with_enumeration() {
        for n in 0..=5 {
            for m in 0..=5 {
                if n + m == 0 || n + m >= 6 || (m == 0 && n < 2) {
                    continue;
                }
                let base = enumerate_trees(n, m).unwrap();
                let grown = grow_box(&base, n, m);
                assert_eq!(
                    grown,
                    enumerate_trees(n + 1, m).unwrap(),
                    "grow_box({},{})",
                    n,
                    m
                );
                let grown = grow_circle(&base, n, m);
                assert_eq!(
                    grown,
                    enumerate_trees(n, m + 1).unwrap(),
                    "grow_circle({},{})",
                    n,
                    m
                );
            }
        }
    }

    #[test]
    fn growth_chain_counts() {
        // G_{0,3} -> G_{0,4}: 4 -> 29; G_{1,1} -> G_{1,2}: 1 -> 3
        let g03 = enumerate_trees(0, 3).unwrap();
        assert_eq!(grow_circle(&g03, 0, 3).len(), 29);
        let g11 = enumerate_trees(1, 1).unwrap();
        assert_eq!(grow_circle(&g11, 1, 1).len(), 3);
        let g21 = grow_box(&g11, 1, 1);
        assert_eq!(g21.len(), 2);
        assert_eq!(grow_box(&g21, 2, 1).len(), 5);
    }

    #[test]
    fn automorphisms_are_trivial() {
        for t in enumerate_trees(3, 1).unwrap() {
            assert_eq!(t.aut(), 1);
        }
        for t in enumerate_trees(0, 4).unwrap() {
            assert_eq!(t.aut(), 1);
        }
        assert_eq!(enumerate_trees(4, 0).unwrap().iter().next().unwrap().aut(), 1);
        let single = Tree::new(1, 1, vec![DoubleSet::new(vec![1], vec![1])]);
        assert_eq!(single.aut(), 1);
    }

    #[test]
    fn aut_sum_matches_ordered_partition_form() {
        // Σ_{T∈G_{n,1}} 1/Aut(T) = Σ_k (ordered partitions of n into k blocks)/k!
        // with ordered counts k!·S(n,k) from an independent Stirling recurrence
        for n in 1..=6 {
            let mut lhs = Rat::zero();
            for t in enumerate_trees(n, 1).unwrap() {
                lhs = &lhs + &Rat::new(1.into(), (t.aut() as i64).into());
            }
            // second kind Stirling triangle
            let mut s2 = vec![vec![0i64; n + 1]; n + 1];
            s2[0][0] = 1;
            for i in 1..=n {
                for k in 1..=i {
                    s2[i][k] = s2[i - 1][k - 1] + (k as i64) * s2[i - 1][k];
                }
            }
            let mut rhs = Rat::zero();
            let mut fact = 1i64;
            for k in 1..=n {
                fact *= k as i64;
                // ordered partitions into k blocks = k!·S(n,k)
                rhs = &rhs + &Rat::new((fact * s2[n][k]).into(), fact.into());
            }
            assert_eq!(lhs, rhs, "n = {}", n);
            assert_eq!(lhs, rat_int(bell(n) as i64));
        }
    }

    #[test]
    fn circle_valences() {
        let t = Tree::new(
            1,
            2,
            vec![
                DoubleSet::new(vec![1], vec![1]),
                DoubleSet::new(vec![], vec![1, 2]),
            ],
        );
        assert_eq!(t.circle_valences(), vec![2, 1]);
    }
}
