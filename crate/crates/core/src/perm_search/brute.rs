/// Calls `f` on every permutation of `{0, …, n-1}` (Heap's algorithm).
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut a: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    f(&a);
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            f(&a);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn visits_every_permutation_once() {
        for n in 0..=6 {
            let mut seen = BTreeSet::new();
            let mut count = 0;
            for_each_permutation(n, |p| {
                seen.insert(p.to_vec());
                count += 1;
            });
            let fact: usize = (1..=n).product();
            assert_eq!(count, fact);
            assert_eq!(seen.len(), fact);
        }
    }
}
