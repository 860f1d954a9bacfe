from typing import (
    Callable,
    Dict,
    Generic,
    Hashable,
    Iterator,
    Optional,
    TypeVar,
    Union,
    overload,
)


__all__ = ("Registry",)

K = TypeVar("K", bound=Hashable)
T = TypeVar("T")


class Registry(Generic[K, T]):
    """Generic registry object that associates keys (typically enum members
    or short strings) to implementations or factory functions.
    """

    _items: Dict[K, T]

    def __init__(self, name: str = "item"):
        """Constructor.

        Parameters:
            name: human-readable name of the registered items; used in error
                messages only
        """
        self._items = {}
        self._name = name

    def __contains__(self, key: object) -> bool:
        return key in self._items

    def __iter__(self) -> Iterator[K]:
        return iter(self._items)

    def find(self, key: K, **kwds) -> T:
        """Finds an item in the registry with the given key.

        Parameters:
            key: the key to look up

        Keyword arguments:
            default: the default value to return if there is no value
                associated to the key

        Returns:
            the value associated to the key, or the default value if there is
            no such key and a default value is provided

        Raises:
            KeyError: if there is no such item for the given key, and no default
                value was provided
        """
        try:
            return self._items[key]
        except KeyError:
            if "default" in kwds:
                return kwds["default"]
            raise KeyError(f"no {self._name} registered for {key!r}") from None

    def keys(self):
        """Returns the registered keys in registration order."""
        return self._items.keys()

    @overload
    def register(self, key: K) -> Callable[[T], T]: ...

    @overload
    def register(self, key: K, value: T) -> T: ...

    def register(
        self, key: K, value: Optional[T] = None
    ) -> Union[T, Callable[[T], T]]:
        """When called with two arguments, associates an item to the given key
        and checks for duplicates to ensure that already registered items cannot
        be overridden. When called with a single argument, returns a decorator
        that can be applied to a class or function to register it.

        Parameters:
            key: the key to register the item to
            value: the value to register, or `None` to return a decorator
        """
        if value is None:

            def decorator(item: T) -> T:
                if item is None:
                    raise ValueError("None cannot be registered")
                return self.register(key, item)

            return decorator

        existing = self._items.get(key)
        if existing is not None:
            raise ValueError(
                f"{self._name.capitalize()} {key!r} is already registered "
                f"for {existing!r}"
            )
        self._items[key] = value
        return value
