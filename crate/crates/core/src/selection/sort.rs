use crate::domain::dominates;

/// Indices of the input split into successive non-dominated fronts, best
/// first. Indices inside each front are ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrontPartition {
    fronts: Vec<Vec<usize>>,
}

impl FrontPartition {
    pub fn fronts(&self) -> &[Vec<usize>] {
        &self.fronts
    }

    /// Number of fronts (L).
    pub fn len(&self) -> usize {
        self.fronts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fronts.is_empty()
    }

    pub fn first(&self) -> &[usize] {
        self.fronts.first().map_or(&[], Vec::as_slice)
    }

    pub fn last(&self) -> &[usize] {
        self.fronts.last().map_or(&[], Vec::as_slice)
    }

    /// Front index of every input point.
    pub fn ranks(&self, len: usize) -> Vec<usize> {
        let mut ranks = vec![usize::MAX; len];
        for (rank, front) in self.fronts.iter().enumerate() {
            for &i in front {
                ranks[i] = rank;
            }
        }
        ranks
    }

    pub fn into_fronts(self) -> Vec<Vec<usize>> {
        self.fronts
    }
}

/// Fast non-dominated sorting (NSGA-II bookkeeping: per point, the set it
/// dominates and the number of points dominating it).
pub fn fast_nondominated_sort<P: AsRef<[f64]>>(points: &[P]) -> FrontPartition {
    let n = points.len();
    let mut dominated_by: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut domination_count = vec![0usize; n];
    for p in 0..n {
        for q in p + 1..n {
            let (a, b) = (points[p].as_ref(), points[q].as_ref());
            if dominates(a, b) {
                dominated_by[p].push(q);
                domination_count[q] += 1;
            } else if dominates(b, a) {
                dominated_by[q].push(p);
                domination_count[p] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| domination_count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &p in &current {
            for &q in &dominated_by[p] {
                domination_count[q] -= 1;
                if domination_count[q] == 0 {
                    next.push(q);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current);
        current = next;
    }
    FrontPartition { fronts }
}

/// How many members of `set` strictly dominate `x`.
pub fn dominance_count<P: AsRef<[f64]>>(x: &[f64], set: &[P]) -> usize {
    set.iter().filter(|q| dominates(q.as_ref(), x)).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(
            fast_nondominated_sort(&[vec![1.0, 1.0]]).fronts(),
            &[vec![0]]
        );
        let pts = vec![vec![1.0, 1.0], vec![2.0, 2.0], vec![0.0, 3.0]];
        assert_eq!(
            fast_nondominated_sort(&pts).fronts(),
            &[vec![0, 2], vec![1]]
        );
        let flat: Vec<Vec<f64>> = (0..5).map(|i| vec![i as f64, 4.0 - i as f64]).collect();
        assert_eq!(fast_nondominated_sort(&flat).len(), 1);
    }

    #[test]
    fn dominance_count_examples() {
        let set = vec![vec![1.0, 1.0], vec![0.0, 3.0], vec![2.0, 2.0]];
        assert_eq!(dominance_count(&[2.0, 2.0], &set), 1);
        assert_eq!(dominance_count(&[0.0, 3.0], &set), 0);
        assert_eq!(
            dominance_count(&[5.0, 5.0], &[vec![1.0, 1.0], vec![2.0, 2.0]]),
            2
        );
    }

    #[test]
    fn duplicates_share_a_front() {
        let pts = vec![vec![1.0, 1.0], vec![1.0, 1.0], vec![2.0, 2.0]];
        let fp = fast_nondominated_sort(&pts);
        assert_eq!(fp.fronts(), &[vec![0, 1], vec![2]]);
        assert_eq!(fp.ranks(3), vec![0, 0, 1]);
    }
}
