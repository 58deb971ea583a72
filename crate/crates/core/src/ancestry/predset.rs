use crate::error::{Error, Result};

/// Dynamic ordered set of `u64` keys with values, of bounded capacity,
/// supporting `split` (drop all keys above a bound).
///
/// Every key ever inserted stays in a sorted table `T` until evicted; a
/// bit mask marks which entries of `T` are currently in the set.
#[derive(Clone, Debug)]
pub struct PredSet<V> {
    keys: Vec<u64>,
    vals: Vec<V>,
    bits: Vec<u64>,
    size: usize,
    cap: usize,
}

impl<V: Copy> PredSet<V> {
    pub fn with_capacity(cap: usize) -> Self {
        PredSet { keys: Vec::with_capacity(cap), vals: Vec::with_capacity(cap), bits: vec![0; cap.div_ceil(64).max(1)], size: 0, cap }
    }

    pub fn capacity(&self) -> usize {
        self.cap
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn clear(&mut self) {
        self.keys.clear();
        self.vals.clear();
        self.bits.iter_mut().for_each(|w| *w = 0);
        self.size = 0;
    }

    /// Number of table entries with key `< x`.
    fn table_rank(&self, x: u64) -> usize {
        self.keys.partition_point(|&k| k < x)
    }

    /// Number of table entries with key `<= x`.
    fn table_rank_incl(&self, x: u64) -> usize {
        self.keys.partition_point(|&k| k <= x)
    }

    fn bit(&self, i: usize) -> bool {
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    fn set_bit(&mut self, i: usize, on: bool) {
        if on {
            self.bits[i / 64] |= 1 << (i % 64);
        } else {
            self.bits[i / 64] &= !(1 << (i % 64));
        }
    }

    /// Inserts a bit at position `i`, moving later bits up by one.
    fn insert_bit(&mut self, i: usize, on: bool) {
        let (w, o) = (i / 64, i % 64);
        for k in (w + 1..self.bits.len()).rev() {
            self.bits[k] = (self.bits[k] << 1) | (self.bits[k - 1] >> 63);
        }
        let low = self.bits[w] & ((1u64 << o) - 1);
        let high = if o == 63 { 0 } else { (self.bits[w] >> o) << (o + 1) };
        self.bits[w] = low | high;
        self.set_bit(i, on);
    }

    /// Removes the bit at position `i`, moving later bits down by one.
    fn remove_bit(&mut self, i: usize) {
        let (w, o) = (i / 64, i % 64);
        let low = self.bits[w] & ((1u64 << o) - 1);
        let high = if o == 63 { 0 } else { (self.bits[w] >> (o + 1)) << o };
        self.bits[w] = low | high;
        for k in w + 1..self.bits.len() {
            self.bits[k - 1] |= (self.bits[k] & 1) << 63;
            self.bits[k] >>= 1;
        }
    }

    /// Highest set bit strictly below position `i`.
    fn last_set_below(&self, i: usize) -> Option<usize> {
        if i == 0 {
            return None;
        }
        let (mut w, o) = ((i - 1) / 64, (i - 1) % 64);
        let mut word = self.bits[w] & (u64::MAX >> (63 - o));
        loop {
            if word != 0 {
                return Some(w * 64 + 63 - word.leading_zeros() as usize);
            }
            if w == 0 {
                return None;
            }
            w -= 1;
            word = self.bits[w];
        }
    }

    /// Lowest set bit at or above position `i`.
    fn first_set_from(&self, i: usize) -> Option<usize> {
        let mut w = i / 64;
        if w >= self.bits.len() {
            return None;
        }
        let mut word = self.bits[w] & (u64::MAX << (i % 64));
        loop {
            if word != 0 {
                let j = w * 64 + word.trailing_zeros() as usize;
                return (j < self.keys.len()).then_some(j);
            }
            w += 1;
            if w >= self.bits.len() {
                return None;
            }
            word = self.bits[w];
        }
    }

    fn entry(&self, j: usize) -> (u64, V) {
        (self.keys[j], self.vals[j])
    }

    /// Inserts `x` with value `v`, replacing the value if `x` is present.
    pub fn insert(&mut self, x: u64, v: V) -> Result<()> {
        let mut i = self.table_rank(x);
        if i < self.keys.len() && self.keys[i] == x {
            self.vals[i] = v;
            if !self.bit(i) {
                self.set_bit(i, true);
                self.size += 1;
            }
            return Ok(());
        }
        if self.keys.len() == self.cap {
            if self.size == self.cap {
                return Err(Error::CapacityExceeded(self.cap));
            }
            let j = (0..self.keys.len()).find(|&j| !self.bit(j)).expect("a tombstone exists");
            self.keys.remove(j);
            self.vals.remove(j);
            self.remove_bit(j);
            if j < i {
                i -= 1;
            }
        }
        self.keys.insert(i, x);
        self.vals.insert(i, v);
        self.insert_bit(i, true);
        self.size += 1;
        Ok(())
    }

    /// Removes `x`; returns whether it was present.
    pub fn delete(&mut self, x: u64) -> bool {
        let i = self.table_rank(x);
        if i < self.keys.len() && self.keys[i] == x && self.bit(i) {
            self.set_bit(i, false);
            self.size -= 1;
            true
        } else {
            false
        }
    }

    pub fn get(&self, x: u64) -> Option<V> {
        let i = self.table_rank(x);
        (i < self.keys.len() && self.keys[i] == x && self.bit(i)).then(|| self.vals[i])
    }

    /// Largest key `< x`.
    pub fn pred(&self, x: u64) -> Option<(u64, V)> {
        self.last_set_below(self.table_rank(x)).map(|j| self.entry(j))
    }

    /// Largest key `<= x`.
    pub fn pred_incl(&self, x: u64) -> Option<(u64, V)> {
        self.last_set_below(self.table_rank_incl(x)).map(|j| self.entry(j))
    }

    /// Smallest key `> x`.
    pub fn succ(&self, x: u64) -> Option<(u64, V)> {
        self.first_set_from(self.table_rank_incl(x)).map(|j| self.entry(j))
    }

    /// Number of keys `< x`.
    pub fn rank(&self, x: u64) -> usize {
        let i = self.table_rank(x);
        let full = i / 64;
        let mut c: usize = self.bits[..full].iter().map(|w| w.count_ones() as usize).sum();
        if !i.is_multiple_of(64) {
            c += (self.bits[full] & ((1u64 << (i % 64)) - 1)).count_ones() as usize;
        }
        c
    }

    /// The key of rank `i` (0-based).
    pub fn select(&self, i: usize) -> Option<(u64, V)> {
        let mut left = i;
        for (w, &word) in self.bits.iter().enumerate() {
            let c = word.count_ones() as usize;
            if left < c {
                let mut x = word;
                for _ in 0..left {
                    x &= x - 1;
                }
                return Some(self.entry(w * 64 + x.trailing_zeros() as usize));
            }
            left -= c;
        }
        None
    }

    /// Keeps exactly the keys `<= x`.
    pub fn split(&mut self, x: u64) {
        let i = self.table_rank_incl(x);
        let (w, o) = (i / 64, i % 64);
        if w < self.bits.len() {
            self.bits[w] &= (1u64 << o) - 1;
            for word in &mut self.bits[w + 1..] {
                *word = 0;
            }
        }
        self.size = self.bits.iter().map(|w| w.count_ones() as usize).sum();
    }

    /// Current entries in key order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, V)> + '_ {
        (0..self.keys.len()).filter(|&j| self.bit(j)).map(|j| self.entry(j))
    }
}
