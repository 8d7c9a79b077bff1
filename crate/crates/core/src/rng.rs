use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// What a random substream is used for. Each purpose gets a disjoint block
/// of ChaCha stream ids so adding draws to one never shifts another.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum Stream {
    Picos = 1,
    Ues = 2,
    Shadowing = 3,
    FAloha = 4,
}

/// Deterministic generator for `(seed, drop, purpose, entity)`.
///
/// The key is built from the run seed and drop index; the stream id carries
/// the purpose in its top byte and the entity (cell id, pico id) below.
pub fn substream(seed: u64, drop: u64, purpose: Stream, entity: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&drop.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(((purpose as u64) << 56) | (entity & 0x00ff_ffff_ffff_ffff));
    rng
}
