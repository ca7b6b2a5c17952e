/// Fixed-capacity set of tile ids backed by packed 64-bit words, with the
/// cardinality cached. An empty mask marks a contradiction at a cell.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct TileMask {
    words: Vec<u64>,
    count: u32,
}

impl Clone for TileMask {
    fn clone(&self) -> TileMask {
        TileMask {
            words: self.words.clone(),
            count: self.count,
        }
    }

    // Snapshots on the solver's hot path copy masks in place; keep the
    // existing allocation.
    fn clone_from(&mut self, source: &TileMask) {
        self.words.clone_from(&source.words);
        self.count = source.count;
    }
}

const WORD_BITS: usize = 64;

impl TileMask {
    /// Empty mask with capacity for tiles `0..domain`.
    pub fn empty(domain: usize) -> TileMask {
        TileMask {
            words: vec![0; domain.div_ceil(WORD_BITS)],
            count: 0,
        }
    }

    /// Full mask containing every tile in `0..domain`.
    pub fn full(domain: usize) -> TileMask {
        let mut words = vec![!0u64; domain.div_ceil(WORD_BITS)];
        let tail = domain % WORD_BITS;
        if tail != 0 {
            *words.last_mut().expect("domain >= 1") = (1u64 << tail) - 1;
        }
        TileMask {
            words,
            count: domain as u32,
        }
    }

    pub fn from_tiles(domain: usize, tiles: impl IntoIterator<Item = u32>) -> TileMask {
        let mut m = TileMask::empty(domain);
        for t in tiles {
            m.insert(t);
        }
        m
    }

    pub fn contains(&self, tile: u32) -> bool {
        let (w, b) = (tile as usize / WORD_BITS, tile as usize % WORD_BITS);
        self.words.get(w).is_some_and(|word| word & (1 << b) != 0)
    }

    /// Insert a tile; returns true if the mask changed.
    pub fn insert(&mut self, tile: u32) -> bool {
        let (w, b) = (tile as usize / WORD_BITS, tile as usize % WORD_BITS);
        let bit = 1u64 << b;
        if self.words[w] & bit == 0 {
            self.words[w] |= bit;
            self.count += 1;
            true
        } else {
            false
        }
    }

    /// Remove a tile; returns true if the mask changed.
    pub fn remove(&mut self, tile: u32) -> bool {
        let (w, b) = (tile as usize / WORD_BITS, tile as usize % WORD_BITS);
        let bit = 1u64 << b;
        if self.words[w] & bit != 0 {
            self.words[w] &= !bit;
            self.count -= 1;
            true
        } else {
            false
        }
    }

    /// Cached cardinality.
    pub fn len(&self) -> u32 {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// The single member of a singleton mask.
    pub fn sole_tile(&self) -> Option<u32> {
        if self.count != 1 {
            return None;
        }
        self.iter().next()
    }

    /// Number of tiles present in both masks.
    pub fn intersect_count(&self, other: &TileMask) -> u32 {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum()
    }

    pub fn intersects(&self, other: &TileMask) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn is_subset_of(&self, other: &TileMask) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    /// Iterate member tile ids in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros();
                w &= w - 1;
                Some(wi as u32 * WORD_BITS as u32 + b)
            })
        })
    }

    /// Append the members of `self & other` to `out` in increasing order,
    /// without allocating.
    pub fn intersection_into(&self, other: &TileMask, out: &mut Vec<u32>) {
        for (wi, (a, b)) in self.words.iter().zip(&other.words).enumerate() {
            let mut w = a & b;
            while w != 0 {
                let b = w.trailing_zeros();
                w &= w - 1;
                out.push(wi as u32 * WORD_BITS as u32 + b);
            }
        }
    }

    /// Heap footprint in bytes, for memory-scaling instrumentation.
    pub fn heap_bytes(&self) -> usize {
        self.words.len() * std::mem::size_of::<u64>()
    }

    #[doc(hidden)]
    pub fn recount(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }
}
