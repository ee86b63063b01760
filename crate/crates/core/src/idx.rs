//! Multi-indices f: {1..r} → {0..p^n − 1}, stored as exponent vectors.

pub type MultiIdx = Vec<u32>;

/// All functions {1..r} → {0..bound-1}, ascending lexicographically.
pub fn enumerate(r: usize, bound: u32) -> Vec<MultiIdx> {
    let mut out = Vec::with_capacity((bound as usize).pow(r as u32));
    let mut cur = vec![0u32; r];
    loop {
        out.push(cur.clone());
        let mut i = r;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] + 1 < bound {
                cur[i] += 1;
                for x in cur.iter_mut().skip(i + 1) {
                    *x = 0;
                }
                break;
            }
        }
    }
}

pub fn is_zero(f: &[u32]) -> bool {
    f.iter().all(|&x| x == 0)
}

/// f ≡ 0 (mod m) componentwise.
pub fn divisible(f: &[u32], m: u32) -> bool {
    f.iter().all(|&x| x % m == 0)
}

pub fn scale(f: &[u32], m: u32) -> MultiIdx {
    f.iter().map(|&x| x * m).collect()
}

pub fn div(f: &[u32], m: u32) -> MultiIdx {
    f.iter().map(|&x| x / m).collect()
}

pub fn rem(f: &[u32], m: u32) -> MultiIdx {
    f.iter().map(|&x| x % m).collect()
}

pub fn add(f: &[u32], g: &[u32]) -> MultiIdx {
    f.iter().zip(g).map(|(&x, &y)| x + y).collect()
}

pub fn sub(f: &[u32], g: &[u32]) -> MultiIdx {
    f.iter().zip(g).map(|(&x, &y)| x - y).collect()
}

/// f ≡ g (mod m) componentwise.
pub fn congruent(f: &[u32], g: &[u32], m: u32) -> bool {
    f.iter().zip(g).all(|(&x, &y)| x % m == y % m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_order_and_size() {
        let all = enumerate(2, 2);
        assert_eq!(all.len(), 4);
        assert_eq!(all[0], vec![0, 0]);
        assert_eq!(all[1], vec![0, 1]);
        assert_eq!(all[3], vec![1, 1]);
    }
}
