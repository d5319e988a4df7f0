import threading

import pytest

from bsmsim.bsm_data import (
    CsvParseError,
    Dataset,
    DatasetStore,
    parse_csv,
    serialize_csv,
)
from conftest import CHAIN_CSV

HEADER = b"vehicle_id,timestamp,latitude,longitude,speed\n"


def test_single_record():
    data = parse_csv(HEADER + b"v1,1000,42.30,-83.60,12.5\n")
    assert data.timestamps == [1000]
    frame = data.frames[0]
    assert len(frame.vehicles) == 1
    rec = frame.vehicles[0]
    assert rec.vehicle_id == "v1"
    assert rec.timestamp == 1000
    assert rec.latitude == 42.30
    assert rec.longitude == -83.60
    assert rec.speed == 12.5
    assert data.record_count == 1
    assert data.warnings == ()


def test_frames_grouped_and_ordered():
    rows = (
        b"v2,1100,42.31,-83.61,1.0\n"
        b"v1,1000,42.30,-83.60,2.0\n"
        b"v3,1000,42.32,-83.62,3.0\n"
        b"v2,1000,42.31,-83.61,4.0\n"
        b"v1,1100,42.30,-83.60,5.0\n"
    )
    data = parse_csv(HEADER + rows)
    assert data.timestamps == [1000, 1100]
    assert [len(f.vehicles) for f in data.frames] == [3, 2]
    assert data.record_count == 5
    # vehicles inside a frame are ordered by id
    assert [r.vehicle_id for r in data.frames[0].vehicles] == ["v1", "v2", "v3"]


def test_duplicate_vehicle_last_wins():
    rows = (
        b"v1,1000,42.30,-83.60,1.0\n"
        b"v1,1000,42.31,-83.61,9.0\n"
    )
    data = parse_csv(HEADER + rows)
    frame = data.frames[0]
    assert len(frame.vehicles) == 1
    assert frame.vehicles[0].latitude == 42.31
    assert frame.vehicles[0].speed == 9.0
    assert data.record_count == 1


def test_header_case_insensitive():
    data = parse_csv(
        b"Vehicle_ID,Timestamp,Latitude,Longitude,Speed\n"
        b"v1,0,42.30,-83.60,0.0\n"
    )
    assert data.record_count == 1


def test_crlf_and_utf8_bom():
    data = parse_csv(
        b"\xef\xbb\xbfvehicle_id,timestamp,latitude,longitude,speed\r\n"
        b"v1,0,42.30,-83.60,0.0\r\n"
    )
    assert data.record_count == 1


def test_rejects_wrong_header():
    with pytest.raises(CsvParseError) as err:
        parse_csv(b"id,time,lat,lon,speed\nv1,0,42.3,-83.6,0.0\n")
    assert "header" in str(err.value).lower()


def test_rejects_empty_and_header_only():
    for content in (b"", HEADER):
        with pytest.raises(CsvParseError) as err:
            parse_csv(content)
        assert "no records" in str(err.value).lower()


@pytest.mark.parametrize(
    "row",
    [
        b"v1,0,91.0,-83.60,0.0\n",        # latitude out of range
        b"v1,0,-91.0,-83.60,0.0\n",
        b"v1,0,42.30,181.0,0.0\n",        # longitude out of range
        b"v1,0,42.30,-83.60,-1.0\n",      # negative speed
        b"v1,0,42.30,-83.60\n",           # missing column
        b"v1,0,42.30,-83.60,0.0,extra\n", # extra column
        b"v1,0,north,-83.60,0.0\n",       # non-numeric coordinate
        b"v1,later,42.30,-83.60,0.0\n",   # non-integer timestamp
        b",0,42.30,-83.60,0.0\n",         # empty vehicle id
    ],
)
def test_rejects_bad_rows_with_line_number(row):
    with pytest.raises(CsvParseError) as err:
        parse_csv(HEADER + b"v9,0,42.30,-83.60,0.0\n" + row)
    assert err.value.line == 3
    assert "line 3" in str(err.value)


def test_parse_is_deterministic():
    a = parse_csv(CHAIN_CSV)
    b = parse_csv(CHAIN_CSV)
    assert a == b
    assert a.dataset_id == b.dataset_id


def test_dataset_id_depends_on_content():
    other = CHAIN_CSV.replace(b"10.0", b"10.1")
    assert parse_csv(CHAIN_CSV).dataset_id != parse_csv(other).dataset_id


def test_round_trip_stable():
    first = parse_csv(CHAIN_CSV)
    text = serialize_csv(first)
    second = parse_csv(text)
    assert second.frames == first.frames
    assert second.record_count == first.record_count
    # a second round trip is a fixpoint byte for byte
    assert serialize_csv(second) == text


def test_round_trip_preserves_duplicate_resolution():
    rows = HEADER + b"v1,5,42.30,-83.60,1.0\nv1,5,42.31,-83.61,2.0\n"
    first = parse_csv(rows)
    second = parse_csv(serialize_csv(first))
    assert second.frames == first.frames


def test_oversize_input_warns_but_parses():
    row = b"v1,1000,42.300000,-83.600000,1.00\n"
    count = (5000 * 1024) // len(row) + 64
    data = parse_csv(HEADER + row * count)
    assert data.record_count == 1  # duplicates collapse
    assert any("5000" in w for w in data.warnings)


def test_summary_fields(chain_dataset):
    s = chain_dataset.summary()
    assert s["dataset_id"] == chain_dataset.dataset_id
    assert s["frame_count"] == 1
    assert s["record_count"] == 3
    assert s["warnings"] == []
    assert s["source_name"] == "chain"


class TestDatasetStore:
    def test_put_get_and_summaries(self, chain_dataset):
        store = DatasetStore()
        store.put(chain_dataset, CHAIN_CSV)
        assert store.get(chain_dataset.dataset_id) is chain_dataset
        assert store.get("missing") is None
        assert [s["dataset_id"] for s in store.summaries()] == [
            chain_dataset.dataset_id
        ]

    def test_persistence_round_trip(self, tmp_path, chain_dataset):
        store = DatasetStore(data_dir=tmp_path)
        store.put(chain_dataset, CHAIN_CSV)
        reloaded = DatasetStore(data_dir=tmp_path)
        got = reloaded.get(chain_dataset.dataset_id)
        assert got is not None
        assert got.frames == chain_dataset.frames

    def test_concurrent_puts(self):
        store = DatasetStore()
        contents = [
            HEADER + b"v1,%d,42.30,-83.60,1.0\n" % t for t in range(32)
        ]
        datasets = [parse_csv(c) for c in contents]

        def put(i: int) -> None:
            store.put(datasets[i], contents[i])

        threads = [threading.Thread(target=put, args=(i,)) for i in range(32)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert len(store.summaries()) == 32
        for d in datasets:
            assert store.get(d.dataset_id) is d


def test_frame_rejects_duplicate_ids():
    from bsmsim.bsm_data import BsmRecord, Frame

    rec = BsmRecord("v1", 0, 42.3, -83.6, 0.0)
    with pytest.raises(ValueError):
        Frame(0, (rec, rec))


def test_dataset_frame_at(chain_dataset):
    assert chain_dataset.frame_at(0) is chain_dataset.frames[0]
    assert chain_dataset.frame_at(999) is None
