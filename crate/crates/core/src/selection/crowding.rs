/// NSGA-II crowding distance of each point within one front. Extreme points
/// of every objective get `f64::INFINITY`; objectives with zero spread add
/// nothing.
pub fn crowding_distance<P: AsRef<[f64]>>(front: &[P]) -> Vec<f64> {
    let n = front.len();
    let mut distance = vec![0.0; n];
    if n == 0 {
        return distance;
    }
    let m = front[0].as_ref().len();
    let mut order: Vec<usize> = (0..n).collect();
    for obj in 0..m {
        let value = |i: usize| front[i].as_ref()[obj];
        order.sort_by(|&a, &b| value(a).total_cmp(&value(b)).then(a.cmp(&b)));
        let (lo, hi) = (value(order[0]), value(order[n - 1]));
        distance[order[0]] = f64::INFINITY;
        distance[order[n - 1]] = f64::INFINITY;
        let spread = hi - lo;
        if spread <= 0.0 {
            continue;
        }
        for w in 1..n.saturating_sub(1) {
            distance[order[w]] += (value(order[w + 1]) - value(order[w - 1])) / spread;
        }
    }
    distance
}
