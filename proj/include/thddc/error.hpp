/*
 * Copyright 2026 The thddc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace thddc
{
// Base of every error the library throws. The CLI maps NumericalError
// subclasses to exit code 2 and everything else to exit code 1.
class Error : public std::runtime_error
{
   public:
    using std::runtime_error::runtime_error;
};

class UsageError : public Error
{
   public:
    using Error::Error;
};

class NumericalError : public Error
{
   public:
    using Error::Error;
};

// Input-shaped problems.
class NumericInputError : public UsageError
{
   public:
    using UsageError::UsageError;
};
class DomainError : public UsageError
{
   public:
    using UsageError::UsageError;
};
class ShapeError : public UsageError
{
   public:
    using UsageError::UsageError;
};
class InvalidModelError : public UsageError
{
   public:
    using UsageError::UsageError;
};
class ConstraintViolationError : public UsageError
{
   public:
    using UsageError::UsageError;
};
class DimensionError : public UsageError
{
   public:
    using UsageError::UsageError;
};
class InfeasibleError : public UsageError
{
   public:
    using UsageError::UsageError;
};
class ParseError : public UsageError
{
   public:
    using UsageError::UsageError;
};
class SchemaVersionError : public ParseError
{
   public:
    using ParseError::ParseError;
};

// Failures that come out of the numerics of a fit.
class SingularMatrixError : public NumericalError
{
   public:
    using NumericalError::NumericalError;
};
class DegenerateComponentError : public NumericalError
{
   public:
    using NumericalError::NumericalError;
};
class FitFailedError : public NumericalError
{
   public:
    using NumericalError::NumericalError;
};
class GridFailedError : public NumericalError
{
   public:
    using NumericalError::NumericalError;
};
}  // namespace thddc
