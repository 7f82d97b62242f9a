use hecke_engine::rouquier::*;
use hecke_engine::soergel::PolyCtx;

fn main() {
    let c = PolyCtx::from_type_str("A3").unwrap();
    let mut word = vec![(0usize, true), (2, true)];
    word.extend(inverse_word(&[(2, true), (0, true)]));
    let cx = BimoduleComplex::braid(&c, &word);
    cx.check().unwrap();
    let (min, _cert) = gaussian_eliminate(&cx).unwrap();
    for (k, t) in min.terms.iter().enumerate() {
        for s in t {
            println!("deg {} word {:?} shift {}", min.min_deg + k as i64, s.word, s.shift);
        }
    }
}
