from pytest import fixture

from amm_lab.types import PoolKind, PoolState


@fixture(params=["asyncio", "trio"])
def anyio_backend(request):
    return request.param


@fixture
def cp_pool():
    return PoolState.constant_product({"alpha": 100.0, "beta": 100.0})


@fixture
def cp_pool_with_fee():
    return PoolState.constant_product({"alpha": 100.0, "beta": 100.0}, gamma=0.997)


@fixture
def cs_pool():
    return PoolState.create(PoolKind.CONSTANT_SUM, {"alpha": 100.0, "beta": 100.0})
