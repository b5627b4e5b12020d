//! Counter-based uniform streams.
//!
//! A [`Stream`] is addressed by `(seed, stream id)` and its k-th output is a
//! pure function of `(seed, stream id, k)`, so any block of work can be
//! regenerated independently of which thread runs it or in what order.

/// SplitMix64 output finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// Source of uniforms on the open interval `(0, 1)`.
pub trait UniformSource {
    fn next_f64(&mut self) -> f64;
}

impl<R: UniformSource + ?Sized> UniformSource for &mut R {
    fn next_f64(&mut self) -> f64 {
        (**self).next_f64()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Stream {
    key: u64,
    counter: u64,
}

impl Stream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let key = mix64(seed ^ mix64(stream.wrapping_add(0x6a09_e667_f3bc_c909)));
        Self { key, counter: 0 }
    }

    /// Stream for one block of one stratum.
    pub fn for_block(seed: u64, stratum: u32, block: u32) -> Self {
        Self::new(seed, (u64::from(stratum) << 32) | u64::from(block))
    }

    /// Jumps to output `index`.
    pub fn at(mut self, index: u64) -> Self {
        self.counter = index;
        self
    }

    pub fn position(&self) -> u64 {
        self.counter
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix64(self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN)))
    }
}

impl UniformSource for Stream {
    #[inline]
    fn next_f64(&mut self) -> f64 {
        // 52 random bits centred in their cell: never 0, never 1, and
        // `1 - u` is exact.
        ((self.next_u64() >> 12) as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
    }
}

/// Reflects every uniform `u` to `1 - u`.
#[derive(Clone, Copy, Debug)]
pub struct Antithetic<R>(pub R);

impl<R: UniformSource> UniformSource for Antithetic<R> {
    #[inline]
    fn next_f64(&mut self) -> f64 {
        1.0 - self.0.next_f64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn deterministic_and_addressable() {
        let mut a = Stream::new(7, 3);
        let xs: Vec<u64> = (0..10).map(|_| a.next_u64()).collect();
        let mut b = Stream::new(7, 3).at(4);
        assert_eq!(b.next_u64(), xs[4]);
        assert_ne!(Stream::new(7, 4).next_u64(), xs[0]);
        assert_ne!(Stream::new(8, 3).next_u64(), xs[0]);
    }

    #[test]
    fn uniforms_in_open_interval_with_right_moments() {
        let mut s = Stream::for_block(1, 2, 3);
        let n = 200_000;
        let (mut m1, mut m2) = (0.0, 0.0);
        for _ in 0..n {
            let u = s.next_f64();
            assert!(u > 0.0 && u < 1.0);
            m1 += u;
            m2 += u * u;
        }
        m1 /= n as f64;
        m2 /= n as f64;
        assert!((m1 - 0.5).abs() < 4.0 * (1.0 / 12.0 / n as f64).sqrt());
        assert!((m2 - 1.0 / 3.0).abs() < 0.003);
    }

    #[test]
    fn antithetic_mirrors() {
        let s = Stream::new(1, 1);
        let mut a = s;
        let mut b = Antithetic(s);
        for _ in 0..100 {
            assert_eq!(a.next_f64() + b.next_f64(), 1.0);
        }
    }
}
