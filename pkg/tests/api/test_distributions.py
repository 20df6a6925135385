"""Tests for the distribution API endpoints."""

from fastapi import status

from tests.vectors import UNIFORMIZE_LITERAL


class TestValidateDistribution:
    """Tests for POST /api/v1/distributions/validate endpoint."""

    def test_rational_literal(self, client):
        """Test fractions come back as exact strings with their null mass."""
        response = client.post(
            "/api/v1/distributions/validate", json={"p": UNIFORMIZE_LITERAL}
        )

        assert response.status_code == status.HTTP_200_OK
        data = response.json()
        assert data["entries"] == ["1/16", "1/6", "1/4", "1/8", "19/48"]
        assert data["null_mass"] == "0"

    def test_json_array(self, client):
        """Test a JSON array of fraction strings and integers."""
        response = client.post(
            "/api/v1/distributions/validate", json={"p": ["1/2", "1/4"]}
        )

        assert response.status_code == status.HTTP_200_OK
        assert response.json()["null_mass"] == "1/4"

    def test_forced_float_mode(self, client):
        """Test mode=float turns fractions into numbers."""
        response = client.post(
            "/api/v1/distributions/validate", json={"p": "1/2,1/4", "mode": "float"}
        )

        assert response.status_code == status.HTTP_200_OK
        data = response.json()
        assert data["entries"] == [0.5, 0.25]
        assert data["null_mass"] == 0.25

    def test_mass_exceeds_one(self, client):
        """Test entries summing above one map to a coded 422."""
        response = client.post("/api/v1/distributions/validate", json={"p": "0.6,0.6"})

        assert response.status_code == status.HTTP_422_UNPROCESSABLE_ENTITY
        data = response.json()
        assert data["error"] == "mass_exceeds_one"
        assert data["error_description"]

    def test_non_positive_entry(self, client):
        """Test a zero entry is rejected."""
        response = client.post("/api/v1/distributions/validate", json={"p": "0,1/2"})

        assert response.status_code == status.HTTP_422_UNPROCESSABLE_ENTITY
        assert response.json()["error"] == "non_positive_entry"

    def test_unparseable_literal(self, client):
        """Test a malformed entry is an invalid literal."""
        response = client.post("/api/v1/distributions/validate", json={"p": "1/2,abc"})

        assert response.status_code == status.HTTP_422_UNPROCESSABLE_ENTITY
        assert response.json()["error"] == "invalid_literal"

    def test_unknown_field(self, client):
        """Test extra request fields fail request validation."""
        response = client.post(
            "/api/v1/distributions/validate", json={"p": "1/2", "q": "1/2"}
        )

        assert response.status_code == status.HTTP_422_UNPROCESSABLE_ENTITY
        assert "detail" in response.json()


class TestNormalize:
    def test_removes_null_mass(self, client):
        """Test (1/4, 1/4) rescales to (1/2, 1/2)."""
        response = client.post("/api/v1/distributions/normalize", json={"p": "1/4,1/4"})

        assert response.status_code == status.HTTP_200_OK
        assert response.json() == {"entries": ["1/2", "1/2"], "null_mass": "0"}


class TestMajorizes:
    """Tests for POST /api/v1/distributions/majorizes endpoint."""

    def test_more_spread_vector_majorizes(self, client):
        """Test (1/2, 3/10, 1/5) majorizes (2/5, 2/5, 1/5) and not conversely."""
        forward = client.post(
            "/api/v1/distributions/majorizes",
            json={"a": "1/2,3/10,1/5", "b": "2/5,2/5,1/5"},
        )
        backward = client.post(
            "/api/v1/distributions/majorizes",
            json={"a": "2/5,2/5,1/5", "b": "1/2,3/10,1/5"},
        )

        assert forward.json() == {"majorizes": True}
        assert backward.json() == {"majorizes": False}

    def test_length_mismatch(self, client):
        """Test vectors of different lengths cannot be compared."""
        response = client.post(
            "/api/v1/distributions/majorizes", json={"a": "1/2,1/2", "b": "1/3,1/3,1/3"}
        )

        assert response.status_code == status.HTTP_422_UNPROCESSABLE_ENTITY
        assert response.json()["error"] == "length_mismatch"


class TestReferenceVectors:
    """Tests for the almost-uniform and extremal endpoints."""

    def test_almost_uniform(self, client):
        """Test every entry equals (1 - p0) / n."""
        response = client.post(
            "/api/v1/distributions/almost-uniform", json={"n": 4, "p0": "1/5"}
        )

        assert response.status_code == status.HTTP_200_OK
        assert response.json() == {"entries": ["1/5"] * 4, "null_mass": "1/5"}

    def test_extremal_member(self, client):
        """Test gamma = 7/10 sits at position 4 for n=5, p0=1/10, theta=1/20."""
        response = client.post(
            "/api/v1/distributions/extremal",
            json={"n": 5, "p0": "1/10", "theta": "1/20", "j": 4},
        )

        assert response.status_code == status.HTTP_200_OK
        assert response.json()["entries"] == ["1/20", "1/20", "1/20", "7/10", "1/20"]

    def test_theta_too_large(self, client):
        """Test theta above (1 - p0)/n is rejected."""
        response = client.post(
            "/api/v1/distributions/extremal", json={"n": 3, "theta": "1/2"}
        )

        assert response.status_code == status.HTTP_422_UNPROCESSABLE_ENTITY
        assert response.json()["error"] == "invalid_theta"

    def test_position_out_of_range(self, client):
        """Test a gamma position past n is rejected."""
        response = client.post(
            "/api/v1/distributions/extremal",
            json={"n": 2, "theta": "1/4", "j": 3},
        )

        assert response.status_code == status.HTTP_422_UNPROCESSABLE_ENTITY
        assert response.json()["error"] == "index_out_of_range"
