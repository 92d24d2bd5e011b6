#!/usr/bin/env python3
"""Regenerates the bundled fixtures under fixtures/.

Deterministic: running it twice produces byte-identical files.

  embeddings_50k.txt.gz   50,000 tokens x 50 dims, GloVe text format, gzipped
  toy_embeddings.txt      small plain-text store used by CLI tests and demos
  kb_toy.tsv              200 unique entity<TAB>category pairs
"""
import gzip
import os
import random

ROOT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "fixtures")

CLUSTERS = {
    "housing": """kitchen bath bathroom balcony bathtub shower toilet closet garage garden
        veranda terrace patio fireplace basement attic sink faucet dishwasher washbasin
        intercom elevator parking loft pantry laundry skylight sauna jacuzzi doorbell
        system_kitchen walk_in_closet floor_heating bay_window storage deck porch
        countertop cupboard wardrobe""",
    "programming": """python java rust haskell ruby scala kotlin swift golang javascript
        typescript perl php erlang elixir clojure fortran cobol lisp prolog ocaml fsharp
        lua julia matlab pascal ada dart groovy smalltalk""",
    "food": """sushi ramen tempura udon soba pizza pasta lasagna risotto burger taco burrito
        curry kebab falafel hummus paella croissant baguette dumpling noodle salad steak
        omelette pancake waffle""",
    "city": """tokyo osaka kyoto london paris berlin madrid rome vienna prague lisbon dublin
        oslo stockholm helsinki warsaw budapest athens istanbul cairo nairobi lagos delhi
        mumbai seoul beijing shanghai sydney toronto chicago boston seattle denver austin""",
    "animal": """dog cat horse cow sheep goat pig rabbit fox wolf bear lion tiger leopard
        cheetah zebra giraffe elephant rhino hippo monkey gorilla panda koala kangaroo
        snake lizard turtle frog owl eagle hawk parrot penguin dolphin whale shark""",
    "color": """red green blue yellow orange purple violet pink brown black white gray
        cyan magenta teal maroon navy olive beige turquoise""",
    "mold": """mold mildew dampness leak crack stain rust_stain termite""",
}

DIM = 50
VOCAB = 50_000


def fmt(x):
    s = "%.2f" % x
    return "0.00" if s == "-0.00" else s


def embeddings(rng):
    rows = []
    seen = set()
    for name, words in CLUSTERS.items():
        centroid = [rng.gauss(0, 1) for _ in range(DIM)]
        for w in words.split():
            vec = [c + rng.gauss(0, 0.55) for c in centroid]
            rows.append((w, vec))
            seen.add(w)
    # Filler vocabulary: many small topical clusters of synthetic tokens.
    n_topics = 500
    centroids = [[rng.gauss(0, 1) for _ in range(DIM)] for _ in range(n_topics)]
    i = 0
    while len(rows) < VOCAB:
        topic = rng.randrange(n_topics)
        token = "t%03d_w%05d" % (topic, i)
        i += 1
        vec = [c + rng.gauss(0, 0.9) for c in centroids[topic]]
        rows.append((token, vec))
    rng.shuffle(rows)
    return rows


def write_embeddings(rng):
    rows = embeddings(rng)
    path = os.path.join(ROOT, "embeddings_50k.txt.gz")
    body = "".join(w + " " + " ".join(fmt(x) for x in v) + "\n" for w, v in rows)
    with open(path, "wb") as raw:
        # mtime=0 keeps the archive byte-stable
        with gzip.GzipFile(fileobj=raw, mode="wb", compresslevel=9, mtime=0, filename="") as gz:
            gz.write(body.encode("utf-8"))


def write_toy(rng):
    dim = 8
    rows = []
    for name in ("housing", "programming", "food", "mold"):
        centroid = [rng.gauss(0, 1) for _ in range(dim)]
        for w in CLUSTERS[name].split()[:12]:
            rows.append((w, [c + rng.gauss(0, 0.5) for c in centroid]))
    with open(os.path.join(ROOT, "toy_embeddings.txt"), "w") as f:
        for w, v in rows:
            f.write(w + " " + " ".join("%.4f" % x for x in v) + "\n")


KB = {
    "programming_language": """python java rust haskell ruby scala kotlin swift go javascript
        typescript perl php erlang elixir clojure fortran cobol lisp prolog ocaml lua julia
        c c++ c# dart ada pascal groovy""",
    "jvm_language": "java scala kotlin clojure groovy",
    "functional_language": "haskell ocaml erlang elixir clojure lisp scala",
    "scripting_language": "python ruby perl php lua javascript",
    "snake": "python cobra viper mamba boa anaconda rattlesnake",
    "gemstone": "ruby emerald sapphire diamond opal jade topaz garnet amethyst",
    "island": "java bali sumatra borneo crete sicily sardinia cyprus iceland",
    "coffee": "java espresso latte cappuccino mocha americano macchiato",
    "housing_equipment": """kitchen bath balcony bathtub shower toilet closet garage
        fireplace basement attic dishwasher intercom elevator sauna skylight pantry
        system kitchen walk-in closet floor heating bay window""",
    "kitchen_appliance": "dishwasher oven microwave refrigerator toaster blender kettle stove",
    "room": "kitchen bathroom bedroom living room dining room attic basement pantry study",
    "japanese_dish": "sushi ramen tempura udon soba tonkatsu okonomiyaki yakitori onigiri miso soup",
    "italian_dish": "pizza pasta lasagna risotto gnocchi tiramisu ravioli bruschetta",
    "capital_city": """tokyo london paris berlin madrid rome vienna prague lisbon dublin oslo
        stockholm helsinki warsaw budapest athens cairo nairobi seoul beijing""",
    "port_city": "osaka lisbon istanbul shanghai sydney hamburg rotterdam marseille",
    "big_cat": "lion tiger leopard cheetah jaguar cougar lynx",
    "color": "red green blue yellow orange purple pink brown black white gray teal",
    "herb": "basil oregano thyme rosemary sage mint parsley dill cilantro",
    "bird": "owl eagle hawk parrot penguin sparrow crow swan",
}


def kb_pairs():
    return [(m, cat) for cat, members in KB.items() for m in split_members(members)]


def split_members(members):
    """Whitespace-separated names; two-word names listed in MULTI stay joined."""
    out = []
    words = members.split()
    i = 0
    while i < len(words):
        two = " ".join(words[i:i + 2])
        if two in MULTI:
            out.append(two)
            i += 2
        else:
            out.append(words[i])
            i += 1
    return out


MULTI = {"system kitchen", "walk-in closet", "floor heating", "bay window", "living room",
         "dining room", "miso soup"}


def write_kb():
    pairs = []
    seen = set()
    for p in kb_pairs():
        if p not in seen:
            seen.add(p)
            pairs.append(p)
    pairs = pairs[:200]
    assert len(pairs) == 200, len(pairs)
    with open(os.path.join(ROOT, "kb_toy.tsv"), "w") as f:
        f.write("# entity<TAB>category is-a pairs (desk-scale knowledge base fixture)\n")
        for i, (e, c) in enumerate(pairs):
            f.write("%s\t%s\n" % (e, c))
            if i in (10, 120):
                # repeated pair, collapsed on load
                f.write("%s\t%s\n" % (e, c))
            if i == 100:
                f.write("\n# cities and more\n")


def main():
    os.makedirs(ROOT, exist_ok=True)
    write_embeddings(random.Random(20170808))
    write_toy(random.Random(7))
    write_kb()


if __name__ == "__main__":
    main()
