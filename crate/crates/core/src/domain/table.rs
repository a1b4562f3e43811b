use std::fmt;
use std::sync::Arc;

/// A finite set of input/output pairs, stored sorted and duplicate-free.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Table<T>(Arc<[(T, T)]>);

impl<T: Ord + Clone> Table<T> {
    pub fn empty() -> Table<T> {
        Table(Arc::from(Vec::new()))
    }

    pub fn singleton(input: T, output: T) -> Table<T> {
        Table(Arc::from(vec![(input, output)]))
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (T, T)>) -> Table<T> {
        let mut v: Vec<(T, T)> = entries.into_iter().collect();
        v.sort();
        v.dedup();
        Table(Arc::from(v))
    }

    pub fn entries(&self) -> &[(T, T)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, entry: &(T, T)) -> bool {
        self.0.binary_search(entry).is_ok()
    }

    /// Entry-set inclusion.
    pub fn is_subset(&self, other: &Table<T>) -> bool {
        if self.len() > other.len() {
            return false;
        }
        let mut it = other.0.iter();
        'outer: for e in self.0.iter() {
            for o in it.by_ref() {
                match o.cmp(e) {
                    std::cmp::Ordering::Less => continue,
                    std::cmp::Ordering::Equal => continue 'outer,
                    std::cmp::Ordering::Greater => return false,
                }
            }
            return false;
        }
        true
    }

    pub fn union(&self, other: &Table<T>) -> Table<T> {
        Table::from_entries(self.0.iter().chain(other.0.iter()).cloned())
    }

    /// Every sub-table, including the empty table and `self`, in canonical order.
    pub fn subtables(&self) -> Vec<Table<T>> {
        let mut out: Vec<Table<T>> = subsets_upto(&self.0, self.len())
            .into_iter()
            .map(|s| Table(Arc::from(s)))
            .collect();
        out.sort();
        out
    }
}

impl<T: fmt::Display> fmt::Display for Table<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (a, b)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "({a},{b})")?;
        }
        f.write_str("}")
    }
}

impl<T: fmt::Display> fmt::Debug for Table<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All sub-sequences of `items` with at most `max` elements, preserving order.
pub fn subsets_upto<T: Clone>(items: &[T], max: usize) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for item in items {
        let n = out.len();
        for i in 0..n {
            if out[i].len() < max {
                let mut s = out[i].clone();
                s.push(item.clone());
                out.push(s);
            }
        }
    }
    out
}

/// Sub-sequences of exactly `k` elements.
pub fn subsets_exact<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    fn go<T: Clone>(items: &[T], k: usize, acc: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if acc.len() == k {
            out.push(acc.clone());
            return;
        }
        let need = k - acc.len();
        for i in 0..items.len() {
            if items.len() - i < need {
                break;
            }
            acc.push(items[i].clone());
            go(&items[i + 1..], k, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(items, k, &mut Vec::new(), &mut out);
    out
}

/// Cartesian product of the given choice lists.
pub fn product<T: Clone>(choices: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for opts in choices {
        let mut next = Vec::with_capacity(out.len() * opts.len());
        for prefix in &out {
            for o in opts {
                let mut p = prefix.clone();
                p.push(o.clone());
                next.push(p);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_counts() {
        let xs = [1, 2, 3, 4];
        assert_eq!(subsets_upto(&xs, 4).len(), 16);
        assert_eq!(subsets_upto(&xs, 1).len(), 5);
        assert_eq!(subsets_upto(&xs, 0).len(), 1);
        assert_eq!(subsets_exact(&xs, 2).len(), 6);
        assert_eq!(subsets_exact(&xs, 5).len(), 0);
        assert_eq!(product(&[vec![1, 2], vec![3], vec![4, 5, 6]]).len(), 6);
        assert_eq!(product::<i32>(&[]).len(), 1);
    }

    #[test]
    fn inclusion() {
        let a = Table::from_entries([(1, 7)]);
        let b = Table::from_entries([(2, 0), (1, 7)]);
        assert!(a.is_subset(&b));
        assert!(!b.is_subset(&a));
        assert!(Table::<i32>::empty().is_subset(&a));
        let c = Table::from_entries([(1, 8), (2, 0)]);
        assert!(!a.is_subset(&c));
        assert_eq!(b.subtables().len(), 4);
    }
}
