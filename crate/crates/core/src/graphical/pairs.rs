/// Row-major enumeration of the unordered pairs `j < k` of `0..p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairIndex {
    p: usize,
}

impl PairIndex {
    pub fn new(p: usize) -> Self {
        PairIndex { p }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn len(&self) -> usize {
        self.p * self.p.saturating_sub(1) / 2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Position of the pair `{j, k}`, `j != k`.
    pub fn index(&self, j: usize, k: usize) -> usize {
        let (a, b) = if j < k { (j, k) } else { (k, j) };
        debug_assert!(a != b && b < self.p);
        a * self.p - a * (a + 1) / 2 + (b - a - 1)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.p).flat_map(move |j| ((j + 1)..self.p).map(move |k| (j, k)))
    }

    pub fn pair(&self, idx: usize) -> (usize, usize) {
        let mut rem = idx;
        for j in 0..self.p {
            let row = self.p - j - 1;
            if rem < row {
                return (j, j + 1 + rem);
            }
            rem -= row;
        }
        panic!("pair index {idx} out of range for p = {}", self.p);
    }
}
