import pytest

from sketchduel import classifier, dataset, synth

DESK_CATEGORIES = ["line", "circle", "square", "triangle", "zigzag",
                   "star", "tshape", "spiral", "arrow", "plus"]
DESK_PER_CATEGORY = 200
DESK_SEED = 20240901

TINY_CATEGORIES = ["line", "circle", "square", "tshape"]
TINY_SEED = 1234


@pytest.fixture(scope="session")
def desk_dataset():
    """10-category synthetic desk corpus, 200 examples each."""
    return synth.synth_dataset(DESK_CATEGORIES, DESK_PER_CATEGORY, DESK_SEED)


@pytest.fixture(scope="session")
def desk_index(desk_dataset):
    return classifier.build_index(desk_dataset, k=classifier.DEFAULT_K)


@pytest.fixture(scope="session")
def desk_budgets(desk_dataset):
    return dataset.compute_ink_budgets(desk_dataset, 1.5)


@pytest.fixture(scope="session")
def tiny_dataset():
    """Small 4-category corpus for fast protocol and game tests."""
    return synth.synth_dataset(TINY_CATEGORIES, 30, TINY_SEED)


@pytest.fixture(scope="session")
def tiny_index(tiny_dataset):
    return classifier.build_index(tiny_dataset, k=5)


@pytest.fixture(scope="session")
def tiny_budgets(tiny_dataset):
    return dataset.compute_ink_budgets(tiny_dataset, 1.5)
