"""
资源保护测试
"""
from src.core.resource_guard import ResourceGuard


def test_under_limit(monkeypatch):
    guard = ResourceGuard({'max_memory_mb': 100})
    monkeypatch.setattr(guard, 'memory_mb', lambda: 10.0)
    assert guard.step("mesh") == (False, "")
    assert guard.get_stats()['peak_memory_mb'] == 10.0


def test_trip_over_limit(monkeypatch):
    guard = ResourceGuard({'max_memory_mb': 100})
    monkeypatch.setattr(guard, 'memory_mb', lambda: 250.0)
    stop, reason = guard.step("green")
    assert stop
    assert "green" in reason
    assert guard.get_stats()['is_tripped']


def test_check_interval(monkeypatch):
    guard = ResourceGuard({'max_memory_mb': 100, 'check_interval': 3})
    monkeypatch.setattr(guard, 'memory_mb', lambda: 250.0)
    assert not guard.step()[0]
    assert not guard.step()[0]
    assert guard.step()[0]


def test_reset(monkeypatch):
    guard = ResourceGuard()
    guard.trip("manual")
    assert guard.is_tripped and guard.trip_reason == "manual"
    guard.trip("second")
    assert guard.trip_reason == "manual"
    guard.reset()
    assert not guard.is_tripped
    assert guard.get_stats()['steps'] == 0


def test_real_memory_reading():
    assert ResourceGuard().memory_mb() > 0
