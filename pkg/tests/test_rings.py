import pytest

from artinian import length, ring_dimension
from conditions import build_qgorenstein_tower
from errors import NotPrimeError, RingFileError, ValidationError
from rings import DATA_DIR, EXAMPLES, load_example, load_ring_file, parse_ring_text


def test_parse_ring_text():
    definition = parse_ring_text("p = 3\nvars = x, y, z  # three\nrelation = x*y - z^2\ndimension = 2\n", "a1.ring")
    assert definition.p == 3
    assert definition.variables == ("x", "y", "z")
    assert definition.relations == ("x*y - z^2",)
    assert definition.dimension == 2
    assert definition.label == "a1"
    ring = definition.presentation()
    assert str(ring) == "F_3[x, y, z]/(x*y + 2*z^2)"


def test_relation_error_points_at_character():
    text = "p = 3\nvars = x, y\nlabel = broken\nrelation = x*y - $\n"
    with pytest.raises(RingFileError) as info:
        parse_ring_text(text)
    assert info.value.line == 4
    assert info.value.column == 18


@pytest.mark.parametrize("text,line", [
    ("p = 3\nvars = x\nbogus = 1\n", 3),
    ("p = 3\np = 5\nvars = x\n", 2),
    ("p = three\nvars = x\n", 1),
    ("p = 3\nvars = x,\n", 2),
    ("p = 3\nvars x\n", 2),
])
def test_ring_file_errors(text, line):
    with pytest.raises(RingFileError) as info:
        parse_ring_text(text)
    assert info.value.line == line


def test_missing_key():
    with pytest.raises(RingFileError):
        parse_ring_text("p = 3\n")


def test_non_prime_characteristic():
    with pytest.raises(NotPrimeError):
        parse_ring_text("p = 4\nvars = x\n")


@pytest.mark.parametrize("name", ["a1.ring", "regular2.ring", "twisted_cubic.ring"])
def test_shipped_ring_files(name):
    definition = load_ring_file(DATA_DIR / name)
    assert ring_dimension(definition.presentation()) == definition.dimension


def test_missing_file(tmp_path):
    with pytest.raises(ValidationError):
        load_ring_file(tmp_path / "absent.ring")


@pytest.mark.parametrize("name", sorted(EXAMPLES))
def test_example_dimensions(name):
    example = load_example(name)
    assert ring_dimension(example.ring) == example.dimension


def test_example_characteristic_override():
    assert load_example("a1", p=5).ring.p == 5
    an = load_example("an", an_n=3)
    assert an.ring.relations == (an.ring.parse("x*y - z^4"),)
    assert an.base_socle == "z^3"


def test_unknown_example():
    with pytest.raises(ValidationError):
        load_example("e8")
    with pytest.raises(ValidationError):
        load_example("an", an_n=0)


def test_invalid_utf8_is_a_ring_file_error(tmp_path):
    path = tmp_path / "binary.ring"
    path.write_bytes(b"p = 3\nvars = x, \xff\xfe\n")
    with pytest.raises(RingFileError) as info:
        load_ring_file(path)
    assert info.value.line == 2
    assert info.value.column == 11


def test_qgorenstein_keys_in_ring_file():
    definition = load_ring_file(DATA_DIR / "twisted_cubic.ring")
    ring = definition.presentation()
    data = definition.qgorenstein_data(ring)
    a, b, c, d = ring.ambient.gens
    assert data.h == 3
    assert data.J.generators == (a, b)
    assert (data.x1, data.x2, data.a, data.saturating) == (a, d, b, d)
    assert data.higher == ()
    assert length(build_qgorenstein_tower(data).ideal(1)) == 2


def test_ring_without_qgorenstein_keys():
    definition = load_ring_file(DATA_DIR / "a1.ring")
    assert definition.qgorenstein_data(definition.presentation()) is None


def test_incomplete_qgorenstein_keys():
    with pytest.raises(RingFileError) as info:
        parse_ring_text("p = 2\nvars = a, b\ncanonical = a\nindex = 1\n")
    assert info.value.line == 3


def test_bad_qgorenstein_polynomial_points_at_character():
    text = "p = 2\nvars = a, b\ncanonical = a, $\nindex = 1\nprincipal = a\nparameters = a, b\nsaturating = b\n"
    with pytest.raises(RingFileError) as info:
        parse_ring_text(text)
    assert info.value.line == 3
    assert info.value.column == 16


def test_qgorenstein_parameters_need_higher_principal():
    text = "p = 2\nvars = a, b, c\ncanonical = a\nindex = 1\nprincipal = a\nparameters = a, b, c\nsaturating = b\n"
    definition = parse_ring_text(text)
    with pytest.raises(ValidationError):
        definition.qgorenstein_data(definition.presentation())
