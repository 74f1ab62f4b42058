"""From raw accented text to canonical tokens.

Shows the transliteration table (accent digraphs, punctuation stripping),
inline annotations ((SIC) markers, homograph disambiguators, language
tags, chemistry groups), and the single-letter lemma rules.
"""

from corpusfreq import apply_rules, count_words, normalize, tokenize
from corpusfreq.normalizer import unmapped_characters

print("transliteration into the canonical uppercase alphabet:")
for raw in ("ventrículo", "agüero", "¿Qué año?", "casa, perro.", "H(2)O"):
    print(f"  {raw!r:20} -> {normalize(raw)!r}")

print("\nnormalize is idempotent; canonical text passes through:")
once = normalize("señal única")
print(f"  {once!r} -> {normalize(once)!r}")

print("\ncharacters outside the table become spaces and are tallied:")
print(f"  diagnostics for 'coût@env': {dict(unmapped_characters('coût@env'))}")

print("\ntokenization keeps annotations with their words:")
text = normalize("la kasa (SIC) de PARTE(LA) tiene (H2 O) y ampayer(ENG)")
for token in tokenize(text):
    notes = ",".join(sorted(token.flags)) or "-"
    print(f"  #{token.position} {token.lemma:12} flags={notes}")
print(f"  word count (markers absorbed): {count_words(tokenize(text))}")

print("\nsingle-letter lemma rules disambiguate conjunctions by context:")
for phrase in ("padre e hijos", "siete u ocho", "pan o vino", "5 ó 6", "la e muda"):
    tokens = apply_rules(tokenize(normalize(phrase)))
    print(f"  {phrase!r:18} -> {[t.lemma for t in tokens]}")
