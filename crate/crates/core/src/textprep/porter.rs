//! The Porter stemming algorithm for English, in its published form.
//!
//! Step 2 uses the published `abli -> able` rule set. Words of length one
//! or two are returned unchanged, matching the universal behaviour of the
//! reference implementations. Tokens containing anything other than
//! lowercase ASCII letters are returned unchanged; the algorithm is only
//! defined for plain English words.

/// Stems a lowercase English word.
pub fn stem(word: &str) -> String {
    if word.len() <= 2 || !word.bytes().all(|b| b.is_ascii_lowercase()) {
        return word.to_string();
    }
    let mut w = word.as_bytes().to_vec();
    step1a(&mut w);
    step1b(&mut w);
    step1c(&mut w);
    step2(&mut w);
    step3(&mut w);
    step4(&mut w);
    step5a(&mut w);
    step5b(&mut w);
    String::from_utf8(w).expect("ascii in, ascii out")
}

// A consonant is any letter other than a, e, i, o, u, and other than y
// preceded by a consonant.
fn is_consonant(w: &[u8], i: usize) -> bool {
    match w[i] {
        b'a' | b'e' | b'i' | b'o' | b'u' => false,
        b'y' => i == 0 || !is_consonant(w, i - 1),
        _ => true,
    }
}

// The measure m of [C](VC){m}[V]: the number of vowel-to-consonant
// transitions.
fn measure(w: &[u8]) -> usize {
    let mut m = 0;
    let mut prev_vowel = false;
    for i in 0..w.len() {
        let consonant = is_consonant(w, i);
        if prev_vowel && consonant {
            m += 1;
        }
        prev_vowel = !consonant;
    }
    m
}

fn has_vowel(w: &[u8]) -> bool {
    (0..w.len()).any(|i| !is_consonant(w, i))
}

fn ends_double_consonant(w: &[u8]) -> bool {
    w.len() >= 2 && w[w.len() - 1] == w[w.len() - 2] && is_consonant(w, w.len() - 1)
}

// *o: the stem ends cvc where the final consonant is not w, x, or y.
fn ends_cvc(w: &[u8]) -> bool {
    let n = w.len();
    n >= 3
        && is_consonant(w, n - 3)
        && !is_consonant(w, n - 2)
        && is_consonant(w, n - 1)
        && !matches!(w[n - 1], b'w' | b'x' | b'y')
}

fn stem_len(w: &[u8], suffix: &[u8]) -> Option<usize> {
    if w.len() > suffix.len() && w.ends_with(suffix) {
        Some(w.len() - suffix.len())
    } else if w.len() == suffix.len() && w == suffix {
        Some(0)
    } else {
        None
    }
}

fn step1a(w: &mut Vec<u8>) {
    // sses -> ss and ies -> i both drop the last two letters.
    if w.ends_with(b"sses") || w.ends_with(b"ies") {
        w.truncate(w.len() - 2);
    } else if w.ends_with(b"ss") {
        // unchanged
    } else if w.ends_with(b"s") {
        w.pop();
    }
}

fn step1b(w: &mut Vec<u8>) {
    if let Some(n) = stem_len(w, b"eed") {
        if measure(&w[..n]) > 0 {
            w.pop();
        }
        return;
    }
    let trimmed = if let Some(n) = stem_len(w, b"ed") {
        has_vowel(&w[..n]) && {
            w.truncate(n);
            true
        }
    } else if let Some(n) = stem_len(w, b"ing") {
        has_vowel(&w[..n]) && {
            w.truncate(n);
            true
        }
    } else {
        false
    };
    if trimmed {
        if w.ends_with(b"at") || w.ends_with(b"bl") || w.ends_with(b"iz") {
            w.push(b'e');
        } else if ends_double_consonant(w) && !matches!(w[w.len() - 1], b'l' | b's' | b'z') {
            w.pop();
        } else if measure(w) == 1 && ends_cvc(w) {
            w.push(b'e');
        }
    }
}

fn step1c(w: &mut [u8]) {
    if let Some(n) = stem_len(w, b"y") {
        if has_vowel(&w[..n]) {
            w[n] = b'i';
        }
    }
}

const STEP2_RULES: &[(&[u8], &[u8])] = &[
    (b"ational", b"ate"),
    (b"tional", b"tion"),
    (b"enci", b"ence"),
    (b"anci", b"ance"),
    (b"izer", b"ize"),
    (b"abli", b"able"),
    (b"alli", b"al"),
    (b"entli", b"ent"),
    (b"eli", b"e"),
    (b"ousli", b"ous"),
    (b"ization", b"ize"),
    (b"ation", b"ate"),
    (b"ator", b"ate"),
    (b"alism", b"al"),
    (b"iveness", b"ive"),
    (b"fulness", b"ful"),
    (b"ousness", b"ous"),
    (b"aliti", b"al"),
    (b"iviti", b"ive"),
    (b"biliti", b"ble"),
];

const STEP3_RULES: &[(&[u8], &[u8])] = &[
    (b"icate", b"ic"),
    (b"ative", b""),
    (b"alize", b"al"),
    (b"iciti", b"ic"),
    (b"ical", b"ic"),
    (b"ful", b""),
    (b"ness", b""),
];

// Within a step only the longest matching suffix is considered; if its
// condition fails no rule of the step applies.
fn longest_match<'a>(w: &[u8], rules: &'a [(&[u8], &[u8])]) -> Option<&'a (&'a [u8], &'a [u8])> {
    rules
        .iter()
        .filter(|(suffix, _)| w.ends_with(suffix))
        .max_by_key(|(suffix, _)| suffix.len())
}

fn apply_table(w: &mut Vec<u8>, rules: &[(&[u8], &[u8])]) {
    if let Some((suffix, replacement)) = longest_match(w, rules) {
        let n = w.len() - suffix.len();
        if measure(&w[..n]) > 0 {
            w.truncate(n);
            w.extend_from_slice(replacement);
        }
    }
}

fn step2(w: &mut Vec<u8>) {
    apply_table(w, STEP2_RULES);
}

fn step3(w: &mut Vec<u8>) {
    apply_table(w, STEP3_RULES);
}

const STEP4_SUFFIXES: &[&[u8]] = &[
    b"al", b"ance", b"ence", b"er", b"ic", b"able", b"ible", b"ant", b"ement", b"ment", b"ent",
    b"ion", b"ou", b"ism", b"ate", b"iti", b"ous", b"ive", b"ize",
];

fn step4(w: &mut Vec<u8>) {
    let Some(&suffix) = STEP4_SUFFIXES
        .iter()
        .filter(|s| w.ends_with(s))
        .max_by_key(|s| s.len())
    else {
        return;
    };
    let n = w.len() - suffix.len();
    if measure(&w[..n]) <= 1 {
        return;
    }
    if suffix == b"ion" && !matches!(w[..n].last(), Some(&b's') | Some(&b't')) {
        return;
    }
    w.truncate(n);
}

fn step5a(w: &mut Vec<u8>) {
    if let Some(n) = stem_len(w, b"e") {
        let m = measure(&w[..n]);
        if m > 1 || (m == 1 && !ends_cvc(&w[..n])) {
            w.pop();
        }
    }
}

fn step5b(w: &mut Vec<u8>) {
    if measure(w) > 1 && ends_double_consonant(w) && w.ends_with(b"l") {
        w.pop();
    }
}
